#include "bbmsel/reproduction.hpp"

#include <algorithm>
#include <cmath>

#include "bbmsel/errors.hpp"
#include "bbmsel/rng.hpp"

namespace bbmsel {

ReproductionLaw::ReproductionLaw(std::vector<double> q) : q_(std::move(q)) {
  if (q_.size() < 3) throw DomainError("law.q: needs support beyond 1");
  double total = 0.0;
  for (double p : q_) {
    if (!(p >= 0) || !std::isfinite(p)) throw DomainError("law.q: probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("law.q: probabilities sum to " + std::to_string(total));
  if (q_[1] != 0.0) throw DomainError("law.q: q(1) must be 0");
  m_ = 0.0;
  m2_ = 0.0;
  double acc = 0.0;
  cdf_.resize(q_.size());
  for (std::size_t k = 0; k < q_.size(); ++k) {
    m_ += (static_cast<double>(k) - 1.0) * q_[k];
    m2_ += static_cast<double>(k) * (static_cast<double>(k) - 1.0) * q_[k];
    acc += q_[k];
    cdf_[k] = acc;
  }
  cdf_.back() = 1.0;
  if (!(m_ > 0)) throw DomainError("law.q: mean offspring excess m must be > 0");
  beta0_ = 1.0 / (2.0 * m_);
}

int ReproductionLaw::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(q_.size()) - 1));
}

}  // namespace bbmsel

#pragma once

#include <vector>

namespace bbmsel {
class Rng;

/**
 * Offspring law q on {0, 1, 2, ...} with q(1) = 0.
 *
 * The branching rate is fixed to beta0 = 1/(2m), m = sum (k-1) q(k), so that the
 * expected population grows like e^{t/2}.
 */
class ReproductionLaw {
 public:
  /// q[k] = probability of k offspring. Must sum to 1, have q[1] = 0, m > 0, finite m2.
  explicit ReproductionLaw(std::vector<double> q);
  static ReproductionLaw binary() { return ReproductionLaw({0.0, 0.0, 1.0}); }

  const std::vector<double>& q() const { return q_; }
  double m() const { return m_; }
  double m2() const { return m2_; }
  double beta0() const { return beta0_; }

  int sample(Rng& rng) const;

 private:
  std::vector<double> q_;
  std::vector<double> cdf_;
  double m_;
  double m2_;
  double beta0_;
};

}  // namespace bbmsel

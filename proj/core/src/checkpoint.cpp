#include "bbmsel/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "bbmsel/errors.hpp"

namespace bbmsel {
namespace {

constexpr std::array<char, 8> kMagic{'B', 'B', 'M', 'S', 'E', 'L', 'P', 'C'};

template <class U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> b;
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), b.size());
}

template <class U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) throw DomainError("checkpoint: truncated stream");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

void put_real(std::ostream& os, double d) { put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(d)); }
double get_real(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void save_checkpoint(std::ostream& os, const Population& pop, const std::string& manifest_hash) {
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kCheckpointVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(manifest_hash.size()));
  os.write(manifest_hash.data(), static_cast<std::streamsize>(manifest_hash.size()));
  put_real(os, pop.time);
  put_le<std::uint64_t>(os, pop.particles.size());
  for (const auto& p : pop.particles) {
    put_real(os, p.x);
    put_real(os, p.birth_time);
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(p.colour));
    put_le<std::uint32_t>(os, p.tag);
    put_real(os, p.aux);
    const auto path = p.label.path();
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(path.size()));
    for (auto i : path) put_le<std::uint32_t>(os, i);
  }
  if (!os) throw DomainError("checkpoint: write failed");
}

Population load_checkpoint(std::istream& is, std::string* manifest_hash) {
  std::array<char, 8> magic;
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw DomainError("checkpoint: bad magic");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kCheckpointVersion) throw DomainError("checkpoint: unsupported version " + std::to_string(version));
  const auto hlen = get_le<std::uint32_t>(is);
  std::string hash(hlen, '\0');
  if (!is.read(hash.data(), hlen)) throw DomainError("checkpoint: truncated stream");
  if (manifest_hash) *manifest_hash = hash;
  Population pop;
  pop.time = get_real(is);
  const auto n = get_le<std::uint64_t>(is);
  pop.particles.reserve(n);
  std::vector<std::uint32_t> path;
  for (std::uint64_t k = 0; k < n; ++k) {
    Particle p;
    p.x = get_real(is);
    p.birth_time = get_real(is);
    const auto c = get_le<std::uint8_t>(is);
    if (c > 2) throw DomainError("checkpoint: bad colour");
    p.colour = static_cast<Colour>(c);
    p.tag = get_le<std::uint32_t>(is);
    p.aux = get_real(is);
    const auto d = get_le<std::uint32_t>(is);
    path.resize(d);
    for (auto& i : path) i = get_le<std::uint32_t>(is);
    p.label = Label::from_path(path);
    pop.particles.push_back(std::move(p));
  }
  return pop;
}

}  // namespace bbmsel

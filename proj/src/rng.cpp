#include "opfunc/rng.hpp"

#include <cmath>

namespace opfunc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return std::ldexp(static_cast<double>(next_u64() >> 11), -53);
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_gauss_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_gauss_ = r * std::sin(theta);
  have_cached_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::cgaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

Rng Rng::fork(std::uint64_t stream) const {
  Rng copy = *this;
  std::uint64_t h = copy.next_u64() ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return Rng(h);
}

}  // namespace opfunc

#pragma once

#include <complex>
#include <cstdint>

namespace opfunc {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that streams are
// byte-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double uniform();
  double uniform(double a, double b);

  // standard normal, Box-Muller
  double gaussian();

  // complex standard normal (unit variance per component)
  std::complex<double> cgaussian();

  // derive an independent stream for a named sub-task
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t s_[4];
  double cached_gauss_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace opfunc

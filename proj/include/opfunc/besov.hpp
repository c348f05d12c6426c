#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "opfunc/calculus.hpp"

namespace opfunc {

/// Modulus of continuity: omega(0) = 0, nondecreasing. Power moduli carry
/// the exponent so omega_* has a closed form.
class ModulusOfContinuity {
 public:
  static ModulusOfContinuity power(double alpha);
  static ModulusOfContinuity table(std::vector<double> ts,
                                   std::vector<double> values);
  static ModulusOfContinuity custom(std::function<double(double)> fn);

  double operator()(double t) const;
  bool is_power() const { return alpha_ > 0.0; }
  double alpha() const { return alpha_; }

 private:
  ModulusOfContinuity() = default;
  double alpha_ = -1.0;
  std::function<double(double)> fn_;
};

struct LittlewoodPaleyPieces {
  // (m, piece); pieces with m <= 0 are lumped into the low-pass entry m = 0
  std::vector<std::pair<int, BandlimitedFunction>> pieces;
};

/// Split a trigonometric sum through a fixed smooth dyadic partition of
/// unity in frequency; piece m has Fourier support in the annulus
/// 2^(m-1) <= ||xi|| <= 2^(m+1), the m = 0 entry is the low-pass lump.
LittlewoodPaleyPieces lp_decompose(const BandlimitedFunction& f);

/// Besov norm sum_m 2^(m s) ||f_m||_inf, sup norms estimated on a seeded
/// sample mesh with one local refinement pass.
double besov_norm(const BandlimitedFunction& f, double s,
                  std::uint64_t seed = 1);

/// omega_*(delta) = delta * integral_delta^inf omega(t)/t^2 dt.
/// Closed form delta^alpha / (1 - alpha) for power moduli; adaptive
/// Simpson plus tail extrapolation otherwise. Throws if the tail
/// diverges (omega(t)/t not integrable at infinity).
double modulus_star(const ModulusOfContinuity& omega, double delta);

/// Sampled lower estimate of sup |f(x)-f(y)| / ||x-y||^alpha over a box,
/// with one refinement pass around the maximizer.
double holder_seminorm(const std::function<double(const Eigen::VectorXd&)>& f,
                       int n, double alpha, int sample_pairs,
                       std::uint64_t seed, double box_halfwidth = 8.0);

/// Project uniform-grid samples onto the band ||xi|| <= sigma via the
/// discrete Fourier transform; grid sizes must be powers of two and the
/// per-axis Nyquist frequency must reach sigma.
BandlimitedFunction bandlimit_project(const std::vector<Complex>& samples,
                                      const std::vector<int>& grid_sizes,
                                      const std::vector<double>& periods,
                                      double sigma);

}  // namespace opfunc

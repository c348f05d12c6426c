#include "opfunc/besov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "opfunc/fft.hpp"
#include "opfunc/multiplier.hpp"
#include "opfunc/rng.hpp"

namespace opfunc {

ModulusOfContinuity ModulusOfContinuity::power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ModulusOfContinuity::power: alpha in (0,1)");
  ModulusOfContinuity m;
  m.alpha_ = alpha;
  m.fn_ = [alpha](double t) { return std::pow(t, alpha); };
  return m;
}

ModulusOfContinuity ModulusOfContinuity::table(std::vector<double> ts,
                                               std::vector<double> values) {
  if (ts.size() != values.size() || ts.size() < 2)
    throw std::invalid_argument("ModulusOfContinuity::table: need >= 2 nodes");
  if (ts.front() != 0.0 || values.front() != 0.0)
    throw std::invalid_argument("ModulusOfContinuity::table: omega(0) = 0");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (ts[i] <= ts[i - 1] || values[i] < values[i - 1])
      throw std::invalid_argument(
          "ModulusOfContinuity::table: nodes must increase, values nondecrease");
  ModulusOfContinuity m;
  m.fn_ = [ts = std::move(ts), values = std::move(values)](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= ts.back()) {
      // power extrapolation from the last segment
      const std::size_t k = ts.size() - 1;
      const double beta = std::log(values[k] / values[k - 1]) /
                          std::log(ts[k] / ts[k - 1]);
      return values[k] * std::pow(t / ts[k], beta);
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  };
  return m;
}

ModulusOfContinuity ModulusOfContinuity::custom(
    std::function<double(double)> fn) {
  ModulusOfContinuity m;
  m.fn_ = std::move(fn);
  return m;
}

double ModulusOfContinuity::operator()(double t) const {
  return t <= 0.0 ? 0.0 : fn_(t);
}

namespace {

// chi(t) = 1 for t <= 1, 0 for t >= 2, smooth in between; the telescoping
// generator of the dyadic partition of unity
double lp_chi(double t) { return 1.0 - smoothstep01(t - 1.0); }

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fb, double fm, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

}  // namespace

LittlewoodPaleyPieces lp_decompose(const BandlimitedFunction& f) {
  int mmax = 1;
  while (std::ldexp(1.0, mmax - 1) < f.sigma()) ++mmax;

  std::map<int, std::vector<BandlimitedFunction::Term>> buckets;
  for (const auto& t : f.terms()) {
    const double r = t.xi.norm();
    // low-pass lump: chi(r); annuli m >= 1: chi(r/2^m) - chi(r/2^(m-1))
    double assigned = lp_chi(r);
    if (assigned > 0.0) buckets[0].push_back({t.xi, t.c * assigned});
    for (int m = 1; m <= mmax; ++m) {
      const double w = lp_chi(r / std::ldexp(1.0, m)) -
                       lp_chi(r / std::ldexp(1.0, m - 1));
      if (w > 0.0) buckets[m].push_back({t.xi, t.c * w});
    }
  }
  LittlewoodPaleyPieces out;
  for (auto& [m, terms] : buckets)
    out.pieces.emplace_back(m, BandlimitedFunction(f.n(), std::move(terms)));
  return out;
}

namespace {

double sup_estimate(const BandlimitedFunction& f, std::uint64_t seed) {
  Rng rng(seed);
  const double box = 4.0 * M_PI * (1.0 + 1.0 / std::max(f.sigma(), 0.25));
  Eigen::VectorXd best = Eigen::VectorXd::Zero(f.n());
  double best_val = std::abs(f(best));
  for (int i = 0; i < 2000; ++i) {
    Eigen::VectorXd x(f.n());
    for (int d = 0; d < f.n(); ++d) x(d) = rng.uniform(-box, box);
    const double v = std::abs(f(x));
    if (v > best_val) { best_val = v; best = x; }
  }
  // one local refinement pass around the maximizer
  double radius = 0.5 / std::max(f.sigma(), 0.25);
  for (int round = 0; round < 60; ++round) {
    Eigen::VectorXd x = best;
    for (int d = 0; d < f.n(); ++d) x(d) += radius * rng.gaussian();
    const double v = std::abs(f(x));
    if (v > best_val) { best_val = v; best = x; } else { radius *= 0.93; }
  }
  return best_val;
}

}  // namespace

double besov_norm(const BandlimitedFunction& f, double s, std::uint64_t seed) {
  if (f.terms().empty()) return 0.0;
  const LittlewoodPaleyPieces lp = lp_decompose(f);
  double acc = 0.0;
  for (const auto& [m, piece] : lp.pieces)
    acc += std::pow(2.0, m * s) * sup_estimate(piece, seed + m);
  return acc;
}

double modulus_star(const ModulusOfContinuity& omega, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("modulus_star: delta > 0");
  if (omega.is_power()) {
    const double a = omega.alpha();
    return std::pow(delta, a) / (1.0 - a);
  }
  const auto integrand = [&omega](double t) { return omega(t) / (t * t); };
  double total = 0.0;
  double lo = delta;
  double prev_inc = -1.0;
  int flat_count = 0;
  for (int k = 0; k < 60; ++k) {
    const double hi = 4.0 * lo;
    const double inc = integrate(integrand, lo, hi, 1e-10);
    total += inc;
    if (prev_inc > 0.0) {
      const double r = inc / prev_inc;
      if (r >= 0.9) {
        if (++flat_count >= 3)
          throw std::invalid_argument(
              "modulus_star: tail integral of omega(t)/t^2 diverges; the "
              "Lambda_omega estimate needs omega(t)/t -> 0 integrably");
      } else if (r < 0.75) {
        // geometric tail extrapolation once decay is established
        if (inc < 1e-12 * total || k >= 40) {
          total += inc * r / (1.0 - r);
          break;
        }
      }
    }
    prev_inc = inc;
    lo = hi;
  }
  return delta * total;
}

double holder_seminorm(const std::function<double(const Eigen::VectorXd&)>& f,
                       int n, double alpha, int sample_pairs,
                       std::uint64_t seed, double box_halfwidth) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("holder_seminorm: alpha in (0,1)");
  Rng rng(seed);
  const auto ratio = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double d = (x - y).norm();
    if (d == 0.0) return 0.0;
    return std::abs(f(x) - f(y)) / std::pow(d, alpha);
  };
  Eigen::VectorXd bx = Eigen::VectorXd::Zero(n),
                  by = Eigen::VectorXd::Constant(n, 0.1);
  double best = ratio(bx, by);
  for (int i = 0; i < sample_pairs; ++i) {
    Eigen::VectorXd x(n), y(n);
    for (int d = 0; d < n; ++d) {
      x(d) = rng.uniform(-box_halfwidth, box_halfwidth);
      y(d) = rng.uniform(-box_halfwidth, box_halfwidth);
    }
    const double v = ratio(x, y);
    if (v > best) { best = v; bx = x; by = y; }
  }
  double radius = 0.3 * box_halfwidth;
  for (int round = 0; round < 400; ++round) {
    Eigen::VectorXd x = bx, y = by;
    for (int d = 0; d < n; ++d) {
      x(d) += radius * rng.gaussian();
      y(d) += radius * rng.gaussian();
    }
    const double v = ratio(x, y);
    if (v > best) { best = v; bx = x; by = y; } else { radius *= 0.985; }
  }
  return best;
}

BandlimitedFunction bandlimit_project(const std::vector<Complex>& samples,
                                      const std::vector<int>& grid_sizes,
                                      const std::vector<double>& periods,
                                      double sigma) {
  const int n = static_cast<int>(grid_sizes.size());
  if (n < 1 || periods.size() != grid_sizes.size())
    throw std::invalid_argument("bandlimit_project: bad grid sizes");
  std::size_t total = 1;
  for (int g : grid_sizes) total *= static_cast<std::size_t>(g);
  if (samples.size() != total)
    throw std::invalid_argument("bandlimit_project: sample count mismatch");
  for (int d = 0; d < n; ++d) {
    const double nyquist = M_PI * grid_sizes[d] / periods[d];
    if (nyquist < sigma)
      throw std::invalid_argument(
          "bandlimit_project: grid Nyquist below sigma; refine the grid");
  }

  std::vector<Complex> data = samples;
  fft_nd(data, grid_sizes, false);
  const double norm = static_cast<double>(total);
  double cmax = 0.0;
  for (const auto& c : data) cmax = std::max(cmax, std::abs(c) / norm);

  std::vector<BandlimitedFunction::Term> terms;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Complex c = data[flat] / norm;
    bool keep = std::abs(c) > 1e-12 * std::max(cmax, 1.0);
    Eigen::VectorXd xi(n);
    for (int d = 0; d < n && keep; ++d) {
      const int k =
          idx[d] <= grid_sizes[d] / 2 ? idx[d] : idx[d] - grid_sizes[d];
      if (k == -grid_sizes[d] / 2) keep = false;  // unpaired Nyquist bin
      xi(d) = 2.0 * M_PI * k / periods[d];
    }
    if (keep && xi.norm() <= sigma + 1e-12) {
      if (xi.norm() == 0.0) c = Complex(c.real(), 0.0);
      terms.push_back({xi, c});
    }
    int d = n - 1;
    while (d >= 0 && idx[d] == grid_sizes[d] - 1) { idx[d] = 0; --d; }
    if (d >= 0) ++idx[d];
  }
  // enforce exact conjugate pairing (input may carry numerical noise)
  for (auto& t : terms) {
    if (t.xi.norm() == 0.0) continue;
    for (const auto& u : terms)
      if ((u.xi + t.xi).norm() <= 1e-12) {
        const Complex avg = 0.5 * (t.c + std::conj(u.c));
        t.c = avg;
        break;
      }
  }
  return BandlimitedFunction(n, std::move(terms));
}

}  // namespace opfunc

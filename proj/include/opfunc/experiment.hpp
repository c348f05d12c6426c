#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfunc/besov.hpp"
#include "opfunc/calculus.hpp"
#include "opfunc/spectral.hpp"

namespace opfunc {

struct ExperimentConfig {
  std::string experiment;  // lipschitz | hoelder | omega | schatten | kontr
  int n = 1;
  std::vector<int> dims = {4, 8, 16};
  std::vector<double> sigmas = {1.0, 2.0, 4.0};
  std::vector<double> alphas = {0.3, 0.5, 0.7};
  std::vector<double> ps = {1.0, 1.5, 2.0, 4.0};
  std::vector<double> deltas;  // empty selects log-spaced 1e-3 .. 1
  std::vector<int> kontr_sizes = {4, 8, 16, 32};
  double kontr_tol = 1e-3;
  double dominance = 1.5;  // kontr pass threshold, artifact convention
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out_dir;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::vector<double> delta_grid() const;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> aggregates;
  bool pass = false;
  std::string note;
  int dat_x = 0, dat_y = 1;  // column indices for the gnuplot emission

  double aggregate(const std::string& key) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
  std::string to_dat() const;
};

/// Writes report.json / report.csv / report.dat under dir; bit-stable for
/// identical reports.
void emit_report(const Report& r, const std::string& dir);

/// Haar-like unitary basis with joint spectrum uniform in
/// [-box_halfwidth, box_halfwidth]^n; commutation defect 0 by construction.
CommutingTuple gen_commuting_tuple(int dim, int n, double box_halfwidth,
                                   std::uint64_t seed);

enum class PerturbMode { kSpectralShift, kBasisRotate, kIndependent };

struct PerturbedPair {
  CommutingTuple a, b;
  double delta;  // measured max_j ||A_j - B_j||_op
};

PerturbedPair gen_perturbed_pair(int dim, int n, double eps, PerturbMode mode,
                                 std::uint64_t seed, double box_halfwidth = 2.0);

Report run_lipschitz_experiment(const ExperimentConfig& cfg);
Report run_hoelder_experiment(const ExperimentConfig& cfg);
Report run_omega_experiment(const ExperimentConfig& cfg);
Report run_schatten_experiment(const ExperimentConfig& cfg);
Report run_kontr_experiment(const ExperimentConfig& cfg);

/// Dispatch by cfg.experiment; emits to cfg.out_dir when set.
Report run_experiment(const ExperimentConfig& cfg);

/// g(x) = integral_0^x sin(t)/t dt, adaptive quadrature at 1e-12.
double sine_integral(double x);

/// The counterexample symbol f(x1,x2,x3) = g(x1 - x3) sin(x2) with
/// analytic partials.
ScalarField kontr_field();

/// Smoothed cone |x - a|^alpha; Holder seminorm exactly 1.
ScalarField cone_field(int n, double alpha, const Eigen::VectorXd& a);

}  // namespace opfunc

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "opfunc/besov.hpp"
#include "opfunc/calculus.hpp"
#include "opfunc/dyadic.hpp"
#include "opfunc/experiment.hpp"
#include "opfunc/multiplier.hpp"
#include "opfunc/rng.hpp"

namespace {

using namespace opfunc;

nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  is >> j;
  return j;
}

// named band-limited presets: "sin-xj" (sin of the first coordinate),
// "sinc-si" (band-limited even hump, a discretized Fejer-style profile),
// "random" (seeded trigonometric sum)
BandlimitedFunction preset_function(const std::string& name, int n,
                                    double sigma, std::uint64_t seed) {
  if (name == "sin-xj") return BandlimitedFunction::sin_coordinate(n, 0);
  if (name == "sinc-si") {
    std::vector<BandlimitedFunction::Term> terms;
    const int half = 6;
    for (int k = -half; k <= half; ++k) {
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
      xi(0) = sigma * k / static_cast<double>(half);
      const double w = (1.0 - std::abs(k) / static_cast<double>(half + 1)) /
                       (2.0 * half + 1.0);
      terms.push_back({xi, Complex(w, 0.0)});
    }
    return BandlimitedFunction(n, std::move(terms));
  }
  if (name == "random") {
    Rng rng(seed ^ 0xf00d);
    return BandlimitedFunction::random(n, sigma, 10, rng);
  }
  throw std::runtime_error("unknown preset '" + name + "'");
}

int cmd_run(const std::string& config_path, std::uint64_t seed_override,
            bool has_seed, const std::string& out_dir,
            const std::string& experiment) {
  ExperimentConfig cfg;
  if (!config_path.empty())
    cfg = ExperimentConfig::from_json(load_json(config_path));
  if (!experiment.empty()) cfg.experiment = experiment;
  if (has_seed) cfg.seed = seed_override;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const Report rep = run_experiment(cfg);
  std::cout << rep.experiment << ": " << (rep.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& [k, v] : rep.aggregates)
    std::cout << "  " << k << " = " << v << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opfunc: perturbation estimates for functions of commuting "
               "Hermitian tuples"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir, experiment;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("experiment", experiment,
                  "lipschitz | hoelder | omega | schatten | kontr");
  run->add_option("--config", config_path, "config JSON file");
  auto* seed_opt = run->add_option("--seed", seed, "override the seed");
  run->add_option("--out", out_dir, "report output directory");

  auto* presets = app.add_subcommand("list-presets", "list named presets");

  // cubes
  std::vector<double> px, py;
  auto* cubes = app.add_subcommand(
      "cubes", "print the maximal admissible cube of a point pair");
  cubes->add_option("--x", px, "first point")->required();
  cubes->add_option("--y", py, "second point")->required();

  // psi-check
  std::string fname = "random";
  int n = 3, pairs = 10000;
  double sigma = 1.0;
  std::uint64_t pseed = 1;
  auto* psic = app.add_subcommand("psi-check",
                                  "verify the decomposition identity on "
                                  "seeded point pairs");
  psic->add_option("--f", fname, "preset name");
  psic->add_option("--n", n, "dimension");
  psic->add_option("--sigma", sigma, "bandwidth");
  psic->add_option("--pairs", pairs, "number of pairs");
  psic->add_option("--seed", pseed, "seed");

  // gamma2
  std::string matrix_path;
  double tol = 1e-6;
  auto* g2 = app.add_subcommand("gamma2",
                                "Schur multiplier norm of a matrix fixture");
  g2->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  g2->add_option("--tol", tol, "certificate gap tolerance");

  // grid-norm
  std::string phi_preset = "kontr-d2";
  int grid_n = 8;
  double grid_r = 4.0;
  std::uint64_t gseed = 1;
  auto* gn = app.add_subcommand(
      "grid-norm", "multiplier norm of a symbol sampled on a seeded grid");
  gn->add_option("--phi", phi_preset, "kontr-d1 | kontr-d2 | kontr-d3");
  gn->add_option("--grid", grid_n, "points per side");
  gn->add_option("--radius", grid_r, "grid half-width");
  gn->add_option("--seed", gseed, "seed");
  gn->add_option("--tol", tol, "certificate gap tolerance");

  // besov
  std::string bf = "sin-xj";
  double s = 1.0;
  int bn = 1;
  double bsigma = 1.0;
  auto* bs = app.add_subcommand("besov", "Besov norm of a preset");
  bs->add_option("--f", bf, "preset name");
  bs->add_option("--n", bn, "dimension");
  bs->add_option("--sigma", bsigma, "bandwidth for random presets");
  bs->add_option("--s", s, "smoothness index");

  // modulus-star
  double alpha = 0.5, delta = 1e-3;
  auto* ms = app.add_subcommand("modulus-star",
                                "omega_*(delta) for the power modulus");
  ms->add_option("--alpha", alpha, "exponent");
  ms->add_option("--delta", delta, "argument");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir,
                     experiment);
    if (presets->parsed()) {
      std::cout << "functions: sin-xj, sinc-si, random\n"
                << "symbols:   kontr-d1, kontr-d2, kontr-d3\n"
                << "experiments: lipschitz, hoelder, omega, schatten, kontr\n";
      return 0;
    }
    if (cubes->parsed()) {
      Eigen::VectorXd x(px.size()), y(py.size());
      for (std::size_t i = 0; i < px.size(); ++i) x(i) = px[i];
      for (std::size_t i = 0; i < py.size(); ++i) y(i) = py[i];
      std::cout << cube_to_json(maximal_admissible(x, y)).dump(2) << "\n";
      return 0;
    }
    if (psic->parsed()) {
      const BandlimitedFunction f = preset_function(fname, n, sigma, pseed);
      Rng rng(pseed);
      double worst = 0.0;
      for (int i = 0; i < pairs; ++i) {
        Eigen::VectorXd x(n), y(n);
        for (int d = 0; d < n; ++d) {
          x(d) = rng.uniform(-12.0, 12.0);
          y(d) = rng.uniform(-12.0, 12.0);
        }
        const double tolr =
            1e-9 * (1.0 + std::abs(f(x)) + std::abs(f(y)));
        worst = std::max(worst, psi_identity_residual(f, x, y) / tolr);
      }
      std::cout << "max residual / tolerance = " << worst << " over " << pairs
                << " pairs: " << (worst <= 1.0 ? "PASS" : "FAIL") << "\n";
      return worst <= 1.0 ? 0 : 1;
    }
    if (g2->parsed()) {
      const Matrix m = matrix_from_json(load_json(matrix_path));
      const MultiplierCertificate cert = gamma2_norm(m, tol);
      std::cout << cert.to_json().dump(2) << "\n";
      return 0;
    }
    if (gn->parsed()) {
      const ScalarField f = kontr_field();
      int j = phi_preset == "kontr-d1" ? 0 : phi_preset == "kontr-d3" ? 2 : 1;
      Rng rng(gseed);
      std::vector<Eigen::VectorXd> gx, gy;
      for (int k = 0; k < grid_n; ++k) {
        Eigen::VectorXd x(3), y(3);
        for (int d = 0; d < 3; ++d) {
          x(d) = rng.uniform(-grid_r, grid_r);
          y(d) = rng.uniform(-grid_r, grid_r);
        }
        gx.push_back(x);
        gy.push_back(y);
      }
      const auto cert = multiplier_norm_on_grid(
          [&f, j](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
            return Complex(divided_difference(f, j, x, y), 0.0);
          },
          gx, gy, tol);
      std::cout << "value=" << cert.value << " lower=" << cert.lower
                << " gap=" << cert.gap << "\n";
      return 0;
    }
    if (bs->parsed()) {
      const BandlimitedFunction f = preset_function(bf, bn, bsigma, 1);
      std::cout << "besov_norm(s=" << s << ") = " << besov_norm(f, s) << "\n";
      return 0;
    }
    if (ms->parsed()) {
      std::cout << "omega_star = "
                << modulus_star(ModulusOfContinuity::power(alpha), delta)
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

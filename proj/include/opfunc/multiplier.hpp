#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "opfunc/calculus.hpp"
#include "opfunc/dyadic.hpp"
#include "opfunc/spectral.hpp"

namespace opfunc {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, h(s)/(h(s)+h(1-s)) with
/// h(s) = exp(-1/s) in between. Shared transition primitive.
double smoothstep01(double s);

/// Even cutoff: 0 on [-1/2, 1/2], 1 outside [-1, 1], smoothstep01(2|t|-1)
/// in between.
double cutoff_omega(double t);

/// Xi_j(x, y) = (1 / (x_j - y_j)) * Phi_j / Phi on a maximal admissible
/// cube of sidelength l > 1, where Phi_j = omega((x_j - y_j)/l) and
/// Phi = sum_j Phi_j; zero when x_j = y_j. Throws std::logic_error if
/// Phi < 1/2 (the separation geometry guarantees Phi >= 1 there, so a
/// small Phi signals a decomposition bug).
double xi_weight(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double l,
                 int j);

/// Psi_j(x, y): unit-cube branch integrates D_j f along the segment
/// (closed form per trigonometric term); large-cube branch is
/// (f(x) - f(y)) Xi_j. Dispatch on maximal_admissible(x, y).
Complex psi(const BandlimitedFunction& f, int j, const Eigen::VectorXd& x,
            const Eigen::VectorXd& y);

/// Psi_j as a DOI symbol.
GridFunction make_psi_grid_function(const BandlimitedFunction& f, int j);

/// |f(x) - f(y) - sum_j (x_j - y_j) Psi_j(x, y)|.
double psi_identity_residual(const BandlimitedFunction& f,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y);

using Symbol2n =
    std::function<Complex(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct DerivativeBound {
  double value = 0.0;
  bool reliable = true;  // false if step-halving disagreed by > 10%
};

/// Derivative-based multiplier bound on a cube Q x R of sidelength L:
/// max over |alpha| <= min(2n+2, 4) of L^|alpha| sup_{(3/2)C} |D^alpha Psi|,
/// suprema on a sampled grid, derivatives by nested central differences.
/// The absolute constant of the estimate is reported as 1.
DerivativeBound lemma_fou_bound(const Symbol2n& psi_fn, const DyadicCube& cube);

/// Certified coefficient-sum bound: window Psi to the 3/2-dilate torus
/// with a C-infinity plateau equal to 1 on the cube, expand in Fourier
/// series on a grid^(2n) lattice, return sum |coefficients| plus twice the
/// outermost dyadic shell as an aliasing remainder. Throws if the
/// remainder exceeds 10% of the sum (grid too small).
double coefficient_sum_bound(const Symbol2n& psi_fn, const DyadicCube& cube,
                             int grid);

/// gamma_2 factorization with a dual witness. M = P Q*; upper is
/// max_k ||row_k P|| * max_l ||row_l Q||; lower is the best dual value
/// (trace-norm pairing against probability weights) and always a valid
/// lower bound on the Schur multiplier norm.
struct MultiplierCertificate {
  double value = 0.0;  // best upper bound (the certified norm estimate)
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
  bool converged = false;
  int iterations = 0;
  Matrix P, Q;

  nlohmann::json to_json() const;
};

/// Schur multiplier norm of a finite matrix via its gamma_2 factorization.
/// Primal/dual pair driven by the weighted trace-norm dual
///   gamma_2(M) = max { ||diag(sqrt u) M diag(sqrt v)||_S1 :
///                      u, v probability vectors },
/// iterated to a fixed point; the factorization is extracted from the SVD
/// at the optimum. Certificate gap <= tol on success.
MultiplierCertificate gamma2_norm(const Matrix& m, double tol = 1e-6,
                                  int max_iter = 50000);

/// max over seeded random probes B of ||M o B||_op / ||B||_op;
/// always <= gamma_2(M).
double gamma2_lower_probe(const Matrix& m, int probes, std::uint64_t seed);

/// gamma_2 norm of the sampled matrix M[k,l] = Phi(gridX_k, gridY_l);
/// a lower bound for the multiplier norm over all spectral measures.
MultiplierCertificate multiplier_norm_on_grid(
    const Symbol2n& phi, const std::vector<Eigen::VectorXd>& gridX,
    const std::vector<Eigen::VectorXd>& gridY, double tol = 1e-6);

}  // namespace opfunc

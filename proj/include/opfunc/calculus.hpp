#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfunc/rng.hpp"
#include "opfunc/spectral.hpp"

namespace opfunc {

using Complex = std::complex<double>;

/// A finite trigonometric sum f(x) = sum_k c_k exp(i <xi_k, x>),
/// real-valued: frequencies come in +/- pairs with conjugate coefficients
/// (or xi = 0 with a real coefficient). The discrete stand-in for "Fourier
/// transform supported in ||xi|| <= sigma".
class BandlimitedFunction {
 public:
  struct Term {
    Eigen::VectorXd xi;
    Complex c;
  };

  /// Throws unless the terms pass the real-valuedness pairing check.
  BandlimitedFunction(int n, std::vector<Term> terms);

  int n() const { return n_; }
  double sigma() const { return sigma_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Eigen::VectorXd& x) const;
  Complex eval_complex(const Eigen::VectorXd& x) const;

  /// Analytic partial derivative D_j f (0-based coordinate).
  double partial(int j, const Eigen::VectorXd& x) const;

  /// f(s * x); bandwidth scales by s.
  BandlimitedFunction dilate(double s) const;

  /// sup |f| <= sum |c_k|, cheap rigorous bound.
  double linf_bound() const;

  /// Seeded random real-valued sum with <= max_pairs frequency pairs,
  /// ||xi|| <= sigma.
  static BandlimitedFunction random(int n, double sigma, int max_pairs,
                                    Rng& rng);
  /// sin(x_j) as a two-term sum.
  static BandlimitedFunction sin_coordinate(int n, int j);

  nlohmann::json to_json() const;
  static BandlimitedFunction from_json(const nlohmann::json& j);

 private:
  int n_;
  std::vector<Term> terms_;
  double sigma_;
};

/// Named scalar function on R^n x R^n (a DOI symbol) or on R^n.
struct GridFunction {
  std::string name;
  int n = 1;
  std::function<Complex(const Eigen::VectorXd&, const Eigen::VectorXd&)> eval;
};

/// Real scalar field on R^n with an optional analytic partial derivative.
struct ScalarField {
  std::string name;
  int n = 1;
  std::function<double(const Eigen::VectorXd&)> eval;
  // optional; divided_difference falls back to central differences
  std::function<double(int, const Eigen::VectorXd&)> partial;
};

ScalarField as_field(const BandlimitedFunction& f);

/// Coordinate-j divided difference with coordinates 0..j-1 of x already
/// replaced by those of y in both numerator terms; the analytic partial
/// derivative on the near-diagonal |x_j - y_j| < 1e-7 (1 + |x_j| + |y_j|).
double divided_difference(const ScalarField& f, int j,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// U diag(f(lambda^(k))) U*; symmetrized to Hermitian when f is real.
Matrix apply_function(const JointEigensystem& js,
                      const std::function<double(const Eigen::VectorXd&)>& f);
Matrix apply_function_complex(
    const JointEigensystem& js,
    const std::function<Complex(const Eigen::VectorXd&)>& f);

/// Double operator integral with finitely supported spectral measures:
/// U_A (M o (U_A* T U_B)) U_B*, M[k,l] = Phi(lambda_A^(k), lambda_B^(l)).
Matrix doi_apply(const GridFunction& phi, const JointEigensystem& jsA,
                 const JointEigensystem& jsB, const Matrix& T);

/// Reference double sum over rank-one spectral projections; O(dim^4),
/// oracle only.
Matrix doi_brute(const GridFunction& phi, const JointEigensystem& jsA,
                 const JointEigensystem& jsB, const Matrix& T);

struct PerturbationCheck {
  Matrix lhs;       // f(A_1..A_n) - f(B_1..B_n)
  Matrix rhs;       // sum_j DOI(Psi_j)(A_j - B_j)
  double residual;  // ||lhs - rhs||_op
};

/// The Psi-based representation of f(A) - f(B), with Psi_j built from the
/// dyadic decomposition (see multiplier.hpp).
PerturbationCheck perturbation_representation(const BandlimitedFunction& f,
                                              const CommutingTuple& tA,
                                              const CommutingTuple& tB);

/// (||DOI(Phi) T||_S2, sup |Phi| on the spectrum grid * ||T||_S2).
std::pair<double, double> doi_s2_bound_check(const GridFunction& phi,
                                             const JointEigensystem& jsA,
                                             const JointEigensystem& jsB,
                                             const Matrix& T);

}  // namespace opfunc

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace opfunc {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian matrix; symmetry is enforced at construction.
class HermitianMatrix {
 public:
  /// Throws std::invalid_argument if dim < 1 or Hermitian symmetry is
  /// violated beyond 1e-12 relative to the largest entry. The stored
  /// matrix is symmetrized exactly, (M + M*)/2.
  explicit HermitianMatrix(const Matrix& m);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

  static HermitianMatrix diagonal(const RealVector& d);

 private:
  Matrix entries_;
};

/// An n-tuple of commuting Hermitian matrices of equal dimension.
struct CommutingTuple {
  std::vector<HermitianMatrix> matrices;
  double commutation_tol;

  /// Throws if the tuple is empty, dims differ, or the worst commutator
  /// exceeds commutation_tol * max operator norm.
  explicit CommutingTuple(std::vector<HermitianMatrix> ms,
                          double commutation_tol = 1e-8);

  int n() const { return static_cast<int>(matrices.size()); }
  int dim() const { return matrices.front().dim(); }
};

/// Discrete joint spectral decomposition: A_j = U diag(spectrum.col(j)) U*.
struct JointEigensystem {
  Matrix basis;              // unitary, dim x dim
  Eigen::MatrixXd spectrum;  // dim x n, row k is the joint eigenvalue point

  int dim() const { return static_cast<int>(basis.rows()); }
  int n() const { return static_cast<int>(spectrum.cols()); }
  Eigen::VectorXd point(int k) const { return spectrum.row(k).transpose(); }
};

/// Hermitian eigendecomposition, eigenvalues ascending. Deterministic for
/// identical inputs.
std::pair<RealVector, Matrix> eigh(const HermitianMatrix& h);

/// Simultaneous diagonalization of a commuting tuple. Eigendecomposes a
/// seeded random linear combination and refines degenerate clusters by
/// recursing on each matrix restricted to the cluster subspace.
/// cluster_tol < 0 selects the default 1e-8 * max_j ||A_j||.
JointEigensystem joint_diagonalize(const CommutingTuple& t,
                                   double cluster_tol = -1.0);

/// Singular values in descending order.
RealVector singular_values(const Matrix& t);

/// Schatten (quasi)norm: (sum s_k^p)^(1/p) for finite p, max s_k for p=inf.
/// p < 1 gives a quasinorm and is accepted; p <= 0 throws.
double schatten_norm(const Matrix& t, double p);

/// Largest singular value.
double operator_norm(const Matrix& t);

/// max over i<j of ||[A_i, A_j]||_op.
double commutation_defect(const std::vector<HermitianMatrix>& ms);

// JSON fixture format: {dim, entries: [[re,im],...] row-major};
// tuples add "n" and a "matrices" array.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json tuple_to_json(const CommutingTuple& t);
CommutingTuple tuple_from_json(const nlohmann::json& j);

}  // namespace opfunc

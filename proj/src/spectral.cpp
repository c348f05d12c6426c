#include "opfunc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "opfunc/rng.hpp"

namespace opfunc {

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw std::invalid_argument("HermitianMatrix: need square matrix, dim >= 1");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: symmetry violated, relative defect "
       << defect / scale;
    throw std::invalid_argument(os.str());
  }
  entries_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return HermitianMatrix(m);
}

CommutingTuple::CommutingTuple(std::vector<HermitianMatrix> ms, double tol)
    : matrices(std::move(ms)), commutation_tol(tol) {
  if (matrices.empty()) throw std::invalid_argument("CommutingTuple: empty");
  if (commutation_tol < 0)
    throw std::invalid_argument("CommutingTuple: negative tolerance");
  const int d = matrices.front().dim();
  for (const auto& m : matrices)
    if (m.dim() != d)
      throw std::invalid_argument("CommutingTuple: dimension mismatch");
  double scale = 0.0;
  for (const auto& m : matrices)
    scale = std::max(scale, operator_norm(m.entries()));
  const double defect = commutation_defect(matrices);
  if (defect > commutation_tol * std::max(scale, 1e-300)) {
    // name the worst pair
    int wi = 0, wj = 1;
    double worst = -1.0;
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j) {
        const Matrix c = matrices[i].entries() * matrices[j].entries() -
                         matrices[j].entries() * matrices[i].entries();
        const double v = operator_norm(c);
        if (v > worst) { worst = v; wi = i; wj = j; }
      }
    std::ostringstream os;
    os << "CommutingTuple: commutation defect " << defect
       << " exceeds tolerance; worst pair (" << wi << "," << wj << ")";
    throw std::invalid_argument(os.str());
  }
}

std::pair<RealVector, Matrix> eigh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Recursively refine the basis so that every matrix in ms is diagonal.
// cols is the index range [lo, hi) of basis columns spanning an invariant
// subspace of all matrices from index `which` on.
void refine_cluster(std::vector<const Matrix*> const& ms, std::size_t which,
                    Matrix& basis, int lo, int hi, double cluster_tol) {
  const int width = hi - lo;
  if (width <= 1 || which >= ms.size()) return;
  const Matrix sub = basis.middleCols(lo, width);
  Matrix restricted = sub.adjoint() * (*ms[which]) * sub;
  restricted = 0.5 * (restricted + restricted.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(restricted);
  basis.middleCols(lo, width) = sub * es.eigenvectors();
  const RealVector ev = es.eigenvalues();
  int start = 0;
  for (int i = 1; i <= width; ++i) {
    if (i == width || ev(i) - ev(i - 1) > cluster_tol) {
      refine_cluster(ms, which + 1, basis, lo + start, lo + i, cluster_tol);
      start = i;
    }
  }
}

}  // namespace

JointEigensystem joint_diagonalize(const CommutingTuple& t, double cluster_tol) {
  const int d = t.dim();
  const int n = t.n();
  double scale = 0.0;
  for (const auto& m : t.matrices)
    scale = std::max(scale, operator_norm(m.entries()));
  if (cluster_tol < 0) cluster_tol = 1e-8 * std::max(scale, 1.0);

  // Generic random combination separates distinct joint eigenvalues.
  Rng rng(0x6a6f696e74ULL);  // fixed stream: output must be input-deterministic
  Matrix combo = Matrix::Zero(d, d);
  for (const auto& m : t.matrices)
    combo += std::complex<double>(rng.uniform(0.5, 1.5), 0.0) * m.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (combo + combo.adjoint().eval()));
  Matrix basis = es.eigenvectors();
  const RealVector ev = es.eigenvalues();

  std::vector<const Matrix*> ms(t.matrices.size());
  for (std::size_t j = 0; j < ms.size(); ++j) ms[j] = &t.matrices[j].entries();

  // combo eigenvalue clusters are candidate joint eigenspaces
  int start = 0;
  const double combo_tol = cluster_tol * static_cast<double>(t.n());
  for (int i = 1; i <= d; ++i) {
    if (i == d || ev(i) - ev(i - 1) > combo_tol) {
      refine_cluster(ms, 0, basis, start, i, cluster_tol);
      start = i;
    }
  }

  JointEigensystem js;
  js.basis = basis;
  js.spectrum.resize(d, n);
  for (int j = 0; j < n; ++j) {
    const Matrix diag = basis.adjoint() * (*ms[j]) * basis;
    for (int k = 0; k < d; ++k) js.spectrum(k, j) = diag(k, k).real();
  }
  return js;
}

RealVector singular_values(const Matrix& t) {
  Eigen::JacobiSVD<Matrix> svd(t);
  return svd.singularValues();
}

double schatten_norm(const Matrix& t, double p) {
  if (!(p > 0.0))
    throw std::invalid_argument("schatten_norm: p must be positive (or inf)");
  const RealVector s = singular_values(t);
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s(0);
  if (p == 2.0) return s.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

double operator_norm(const Matrix& t) {
  if (t.size() == 0) return 0.0;
  const RealVector s = singular_values(t);
  return s(0);
}

double commutation_defect(const std::vector<HermitianMatrix>& ms) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const Matrix c = ms[i].entries() * ms[j].entries() -
                       ms[j].entries() * ms[i].entries();
      worst = std::max(worst, operator_norm(c));
    }
  return worst;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j;
  j["dim"] = m.rows();
  auto& e = j["entries"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      e.push_back({m(r, c).real(), m(r, c).imag()});
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const int d = j.at("dim").get<int>();
  const auto& e = j.at("entries");
  if (static_cast<int>(e.size()) != d * d)
    throw std::invalid_argument("matrix_from_json: entry count mismatch");
  Matrix m(d, d);
  int idx = 0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c, ++idx)
      m(r, c) = std::complex<double>(e[idx][0].get<double>(),
                                     e[idx][1].get<double>());
  return m;
}

nlohmann::json tuple_to_json(const CommutingTuple& t) {
  nlohmann::json j;
  j["n"] = t.n();
  j["dim"] = t.dim();
  auto& arr = j["matrices"] = nlohmann::json::array();
  for (const auto& m : t.matrices) arr.push_back(matrix_to_json(m.entries()));
  return j;
}

CommutingTuple tuple_from_json(const nlohmann::json& j) {
  std::vector<HermitianMatrix> ms;
  for (const auto& mj : j.at("matrices"))
    ms.emplace_back(matrix_from_json(mj));
  return CommutingTuple(std::move(ms));
}

}  // namespace opfunc

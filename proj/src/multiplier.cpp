#include "opfunc/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "opfunc/fft.hpp"
#include "opfunc/rng.hpp"

namespace opfunc {

namespace {

double bump_h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// (e^{i theta} - 1) / (i theta), stable near theta = 0:
// e^{i theta/2} * sin(theta/2) / (theta/2)
Complex phase_mean(double theta) {
  const double half = 0.5 * theta;
  double sinc;
  if (std::abs(half) < 1e-4) {
    const double h2 = half * half;
    sinc = 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
  } else {
    sinc = std::sin(half) / half;
  }
  return std::exp(Complex(0.0, half)) * sinc;
}

}  // namespace

double smoothstep01(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump_h(s);
  const double b = bump_h(1.0 - s);
  return a / (a + b);
}

double cutoff_omega(double t) { return smoothstep01(2.0 * std::abs(t) - 1.0); }

double xi_weight(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double l,
                 int j) {
  const int n = static_cast<int>(x.size());
  double phi = 0.0;
  for (int i = 0; i < n; ++i) phi += cutoff_omega((x(i) - y(i)) / l);
  if (phi < 0.5) {
    std::ostringstream os;
    os << "xi_weight: Phi = " << phi
       << " < 1/2 on a supposed maximal cube; decomposition bug";
    throw std::logic_error(os.str());
  }
  const double diff = x(j) - y(j);
  if (diff == 0.0) return 0.0;
  const double phi_j = cutoff_omega(diff / l);
  if (phi_j == 0.0) return 0.0;
  return (1.0 / diff) * (phi_j / phi);
}

Complex psi(const BandlimitedFunction& f, int j, const Eigen::VectorXd& x,
            const Eigen::VectorXd& y) {
  const DyadicCube cube = maximal_admissible(x, y);
  if (cube.level == 0) {
    // segment integral of D_j f, term-wise closed form
    Complex acc(0.0, 0.0);
    for (const auto& t : f.terms()) {
      const double theta = t.xi.dot(y - x);
      acc += t.c * Complex(0.0, t.xi(j)) *
             std::exp(Complex(0.0, t.xi.dot(x))) * phase_mean(theta);
    }
    return acc;
  }
  const double l = cube.sidelength();
  const Complex df = f.eval_complex(x) - f.eval_complex(y);
  return df * xi_weight(x, y, l, j);
}

GridFunction make_psi_grid_function(const BandlimitedFunction& f, int j) {
  GridFunction g;
  g.name = "psi_" + std::to_string(j);
  g.n = f.n();
  g.eval = [f, j](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return psi(f, j, x, y);
  };
  return g;
}

double psi_identity_residual(const BandlimitedFunction& f,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) {
  Complex acc(0.0, 0.0);
  for (int j = 0; j < f.n(); ++j) acc += (x(j) - y(j)) * psi(f, j, x, y);
  return std::abs(f.eval_complex(x) - f.eval_complex(y) - acc);
}

namespace {

// apply the multi-index derivative recursively, one coordinate at a time
Complex multi_diff(const Symbol2n& fn, int n, const Eigen::VectorXd& a,
                   const std::vector<int>& orders, int coord, double h) {
  const int dims = 2 * n;
  while (coord < dims && orders[coord] == 0) ++coord;
  if (coord == dims) {
    Eigen::VectorXd x = a.head(n), y = a.tail(n);
    return fn(x, y);
  }
  const int ord = orders[coord];
  Complex acc(0.0, 0.0);
  double binom = 1.0;
  for (int i = 0; i <= ord; ++i) {
    Eigen::VectorXd shifted = a;
    shifted(coord) += (0.5 * ord - i) * h;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom * multi_diff(fn, n, shifted, orders, coord + 1, h);
    binom = binom * (ord - i) / (i + 1);
  }
  return acc / std::pow(h, ord);
}

void enumerate_multi_indices(int dims, int max_total,
                             std::vector<int>& current, int pos,
                             std::vector<std::vector<int>>& out) {
  if (pos == dims) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int i = 0; i < pos; ++i) used += current[i];
  for (int v = 0; v <= max_total - used; ++v) {
    current[pos] = v;
    enumerate_multi_indices(dims, max_total, current, pos + 1, out);
  }
  current[pos] = 0;
}

}  // namespace

DerivativeBound lemma_fou_bound(const Symbol2n& psi_fn,
                                const DyadicCube& cube) {
  const int n = cube.n;
  const int dims = 2 * n;
  const double L = cube.sidelength();
  // cube center in R^{2n}
  Eigen::VectorXd center(dims);
  for (int i = 0; i < n; ++i) {
    center(i) = (static_cast<double>(cube.q[i]) + 0.5) * L;
    center(n + i) = (static_cast<double>(cube.r[i]) + 0.5) * L;
  }
  const int max_order = std::min(2 * n + 2, 4);
  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(dims, 0);
  enumerate_multi_indices(dims, max_order, cur, 0, alphas);

  // sample grid strictly inside the 3/2-dilate so stencils stay in range
  const int pts = (n == 1) ? 5 : 3;
  const double extent = 0.66 * L;  // half-width of sampled region
  std::vector<Eigen::VectorXd> samples;
  std::vector<int> idx(dims, 0);
  for (;;) {
    Eigen::VectorXd a = center;
    for (int d = 0; d < dims; ++d)
      a(d) += (pts == 1 ? 0.0
                        : -extent + 2.0 * extent * idx[d] / (pts - 1));
    samples.push_back(a);
    int d = dims - 1;
    while (d >= 0 && idx[d] == pts - 1) { idx[d] = 0; --d; }
    if (d < 0) break;
    ++idx[d];
  }

  DerivativeBound out;
  const double h = 0.04 * L;
  for (const auto& alpha : alphas) {
    int total = 0;
    for (int v : alpha) total += v;
    double worst = 0.0, worst_half = 0.0;
    for (const auto& a : samples) {
      const double v = std::abs(multi_diff(psi_fn, n, a, alpha, 0, h));
      worst = std::max(worst, v);
      if (total > 0) {
        const double vh =
            std::abs(multi_diff(psi_fn, n, a, alpha, 0, 0.5 * h));
        worst_half = std::max(worst_half, vh);
      }
    }
    if (total > 0) {
      const double scale = std::max({worst, worst_half, 1e-12});
      if (std::abs(worst - worst_half) > 0.1 * scale) out.reliable = false;
      worst = std::max(worst, worst_half);
    }
    out.value = std::max(out.value, std::pow(L, total) * worst);
  }
  return out;
}

double coefficient_sum_bound(const Symbol2n& psi_fn, const DyadicCube& cube,
                             int grid) {
  if (grid < 4 || (grid & (grid - 1)) != 0)
    throw std::invalid_argument(
        "coefficient_sum_bound: grid must be a power of two >= 4");
  const int n = cube.n;
  const int dims = 2 * n;
  const double L = cube.sidelength();
  // torus period = dilate side 1.5 L per coordinate
  Eigen::VectorXd center(dims);
  for (int i = 0; i < n; ++i) {
    center(i) = (static_cast<double>(cube.q[i]) + 0.5) * L;
    center(n + i) = (static_cast<double>(cube.r[i]) + 0.5) * L;
  }

  // per-coordinate plateau: 1 on the cube (|w| <= 1/2 in units of L),
  // 0 before the dilate boundary at |w| = 3/4
  const auto plateau = [](double w) {
    return smoothstep01((0.74 - std::abs(w)) / 0.24);
  };

  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= static_cast<std::size_t>(grid);
  std::vector<Complex> data(total);
  std::vector<int> idx(dims, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Eigen::VectorXd a(dims);
    double window = 1.0;
    for (int d = 0; d < dims; ++d) {
      const double w = -0.75 + 1.5 * (idx[d] + 0.5) / grid;  // units of L
      a(d) = center(d) + w * L;
      window *= plateau(w);
    }
    if (window != 0.0) {
      Eigen::VectorXd x = a.head(n), y = a.tail(n);
      data[flat] = window * psi_fn(x, y);
    }
    int d = dims - 1;
    while (d >= 0 && idx[d] == grid - 1) { idx[d] = 0; --d; }
    if (d < 0) break;
    ++idx[d];
  }

  std::vector<int> extents(dims, grid);
  fft_nd(data, extents, false);
  const double norm = static_cast<double>(total);

  double sum = 0.0, shell = 0.0;
  std::fill(idx.begin(), idx.end(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const double mag = std::abs(data[flat]) / norm;
    sum += mag;
    int kmax = 0;
    for (int d = 0; d < dims; ++d) {
      const int k = idx[d] <= grid / 2 ? idx[d] : grid - idx[d];
      kmax = std::max(kmax, k);
    }
    if (kmax > grid / 4) shell += mag;
    int d = dims - 1;
    while (d >= 0 && idx[d] == grid - 1) { idx[d] = 0; --d; }
    if (d >= 0) ++idx[d];
  }
  const double remainder = 2.0 * shell;
  if (remainder > 0.1 * std::max(sum, 1e-300)) {
    std::ostringstream os;
    os << "coefficient_sum_bound: aliasing remainder " << remainder
       << " exceeds 10% of the coefficient sum " << sum
       << "; increase the grid (currently " << grid << " per dimension)";
    throw std::invalid_argument(os.str());
  }
  return sum + remainder;
}

nlohmann::json MultiplierCertificate::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["upper"] = upper;
  j["lower"] = lower;
  j["gap"] = gap;
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["P"] = matrix_to_json(P);
  j["Q"] = matrix_to_json(Q);
  return j;
}

namespace {

double max_row_norm(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    worst = std::max(worst, m.row(i).norm());
  return worst;
}

}  // namespace

MultiplierCertificate gamma2_norm(const Matrix& m_in, double tol,
                                  int max_iter) {
  MultiplierCertificate cert;
  const Eigen::Index rows = m_in.rows(), cols = m_in.cols();
  cert.P = Matrix::Zero(rows, 1);
  cert.Q = Matrix::Zero(cols, 1);
  if (rows == 0 || cols == 0 || m_in.cwiseAbs().maxCoeff() == 0.0) {
    cert.converged = true;
    return cert;
  }

  // drop exactly-zero rows/columns; their factor rows are zero
  std::vector<Eigen::Index> rmap, cmap;
  for (Eigen::Index i = 0; i < rows; ++i)
    if (m_in.row(i).cwiseAbs().maxCoeff() > 0.0) rmap.push_back(i);
  for (Eigen::Index j = 0; j < cols; ++j)
    if (m_in.col(j).cwiseAbs().maxCoeff() > 0.0) cmap.push_back(j);
  Matrix M(rmap.size(), cmap.size());
  for (std::size_t i = 0; i < rmap.size(); ++i)
    for (std::size_t j = 0; j < cmap.size(); ++j)
      M(i, j) = m_in(rmap[i], cmap[j]);

  const Eigen::Index mr = M.rows(), mc = M.cols();
  Eigen::VectorXd u(mr), v(mc);
  for (Eigen::Index i = 0; i < mr; ++i) u(i) = M.row(i).norm();
  for (Eigen::Index j = 0; j < mc; ++j) v(j) = M.col(j).norm();
  u /= u.sum();
  v /= v.sum();

  double best_lower = m_in.cwiseAbs().maxCoeff();
  double best_upper = std::numeric_limits<double>::infinity();
  Matrix bestP, bestQ;
  double prev_phi = 0.0;

  for (int iter = 0; iter < max_iter; ++iter) {
    cert.iterations = iter + 1;
    const Eigen::VectorXd su = u.cwiseMax(1e-300).cwiseSqrt();
    const Eigen::VectorXd sv = v.cwiseMax(1e-300).cwiseSqrt();
    const Matrix A = su.asDiagonal() * M * sv.asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sig = svd.singularValues();
    const double phi = sig.sum();
    best_lower = std::max(best_lower, phi);

    const Matrix shalf =
        svd.matrixU() * sig.cwiseSqrt().asDiagonal();  // U Sigma^(1/2)
    const Matrix thalf = svd.matrixV() * sig.cwiseSqrt().asDiagonal();
    Matrix P = su.cwiseInverse().asDiagonal() * shalf;
    Matrix Q = sv.cwiseInverse().asDiagonal() * thalf;
    const double mp = max_row_norm(P), mq = max_row_norm(Q);
    if (mp > 0.0 && mq > 0.0) {
      const double bal = std::sqrt(mq / mp);
      P *= bal;
      Q /= bal;
      const double upper = mp * mq;
      if (upper < best_upper) {
        best_upper = upper;
        bestP = P;
        bestQ = Q;
      }
    }
    if (best_upper - best_lower <= tol) {
      cert.converged = true;
      break;
    }

    Eigen::VectorXd unew(mr), vnew(mc);
    for (Eigen::Index i = 0; i < mr; ++i)
      unew(i) = shalf.row(i).squaredNorm() / phi;  // diag(U Sigma U*)/phi
    for (Eigen::Index j = 0; j < mc; ++j)
      vnew(j) = thalf.row(j).squaredNorm() / phi;
    // damp if the dual objective moved backwards
    const double beta = (iter > 0 && phi < prev_phi) ? 0.5 : 1.0;
    u = ((1.0 - beta) * u + beta * unew).cwiseMax(1e-300);
    v = ((1.0 - beta) * v + beta * vnew).cwiseMax(1e-300);
    u /= u.sum();
    v /= v.sum();
    prev_phi = phi;
  }

  cert.lower = best_lower;
  cert.upper = best_upper;
  cert.value = best_upper;
  cert.gap = best_upper - best_lower;

  // re-embed factor rows for dropped zero rows/columns
  cert.P = Matrix::Zero(rows, bestP.cols());
  cert.Q = Matrix::Zero(cols, bestQ.cols());
  for (std::size_t i = 0; i < rmap.size(); ++i) cert.P.row(rmap[i]) = bestP.row(i);
  for (std::size_t j = 0; j < cmap.size(); ++j) cert.Q.row(cmap[j]) = bestQ.row(j);
  return cert;
}

double gamma2_lower_probe(const Matrix& m, int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("gamma2_lower_probe: probes >= 1");
  Rng rng(seed);
  double best = 0.0;
  const auto ratio = [&m](const Matrix& b) {
    const double nb = operator_norm(b);
    if (nb == 0.0) return 0.0;
    return operator_norm(m.cwiseProduct(b)) / nb;
  };
  // structured probes: identity-like and the matrix unit at the largest entry
  Matrix eye = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < std::min(m.rows(), m.cols()); ++i) eye(i, i) = 1.0;
  best = std::max(best, ratio(eye));
  Eigen::Index bi = 0, bj = 0;
  m.cwiseAbs().maxCoeff(&bi, &bj);
  Matrix unit = Matrix::Zero(m.rows(), m.cols());
  unit(bi, bj) = 1.0;
  best = std::max(best, ratio(unit));
  best = std::max(best, ratio(Matrix::Ones(m.rows(), m.cols())));
  for (int p = 0; p < probes; ++p) {
    Matrix b(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) b(i, j) = rng.cgaussian();
    best = std::max(best, ratio(b));
  }
  return best;
}

MultiplierCertificate multiplier_norm_on_grid(
    const Symbol2n& phi, const std::vector<Eigen::VectorXd>& gridX,
    const std::vector<Eigen::VectorXd>& gridY, double tol) {
  if (gridX.empty() || gridY.empty())
    throw std::invalid_argument("multiplier_norm_on_grid: empty grid");
  Matrix M(gridX.size(), gridY.size());
  for (std::size_t k = 0; k < gridX.size(); ++k)
    for (std::size_t l = 0; l < gridY.size(); ++l)
      M(k, l) = phi(gridX[k], gridY[l]);
  return gamma2_norm(M, tol);
}

}  // namespace opfunc

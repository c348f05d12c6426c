#include "opfunc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "opfunc/multiplier.hpp"

namespace opfunc {

BandlimitedFunction::BandlimitedFunction(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n < 1) throw std::invalid_argument("BandlimitedFunction: n >= 1");
  sigma_ = 0.0;
  double coeff_scale = 0.0;
  for (const auto& t : terms_) {
    if (t.xi.size() != n)
      throw std::invalid_argument("BandlimitedFunction: frequency dim mismatch");
    sigma_ = std::max(sigma_, t.xi.norm());
    coeff_scale += std::abs(t.c);
  }
  // real-valuedness: every term must have a -xi partner with conjugate
  // coefficient (xi = 0 terms must have real coefficients)
  for (const auto& t : terms_) {
    if (t.xi.norm() == 0.0) {
      if (std::abs(t.c.imag()) > 1e-12 * std::max(coeff_scale, 1.0))
        throw std::invalid_argument(
            "BandlimitedFunction: zero-frequency coefficient must be real");
      continue;
    }
    Complex partner_sum(0.0, 0.0), self_sum(0.0, 0.0);
    for (const auto& u : terms_) {
      if ((u.xi + t.xi).norm() <= 1e-12 * std::max(1.0, t.xi.norm()))
        partner_sum += u.c;
      if ((u.xi - t.xi).norm() <= 1e-12 * std::max(1.0, t.xi.norm()))
        self_sum += u.c;
    }
    if (std::abs(partner_sum - std::conj(self_sum)) >
        1e-12 * std::max(coeff_scale, 1.0))
      throw std::invalid_argument(
          "BandlimitedFunction: terms violate conjugate pairing");
  }
}

Complex BandlimitedFunction::eval_complex(const Eigen::VectorXd& x) const {
  Complex acc(0.0, 0.0);
  for (const auto& t : terms_)
    acc += t.c * std::exp(Complex(0.0, t.xi.dot(x)));
  return acc;
}

double BandlimitedFunction::operator()(const Eigen::VectorXd& x) const {
  return eval_complex(x).real();
}

double BandlimitedFunction::partial(int j, const Eigen::VectorXd& x) const {
  Complex acc(0.0, 0.0);
  for (const auto& t : terms_)
    acc += t.c * Complex(0.0, t.xi(j)) * std::exp(Complex(0.0, t.xi.dot(x)));
  return acc.real();
}

BandlimitedFunction BandlimitedFunction::dilate(double s) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts) t.xi *= s;
  return BandlimitedFunction(n_, std::move(ts));
}

double BandlimitedFunction::linf_bound() const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += std::abs(t.c);
  return acc;
}

BandlimitedFunction BandlimitedFunction::random(int n, double sigma,
                                                int max_pairs, Rng& rng) {
  std::vector<Term> ts;
  const int pairs = 1 + static_cast<int>(rng.next_u64() %
                                         static_cast<std::uint64_t>(max_pairs));
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi(i) = rng.gaussian();
    if (xi.norm() == 0.0) xi(0) = 1.0;
    xi *= sigma * rng.uniform(0.2, 1.0) / xi.norm();
    const Complex c = 0.5 * rng.cgaussian();
    ts.push_back({xi, c});
    ts.push_back({-xi, std::conj(c)});
  }
  return BandlimitedFunction(n, std::move(ts));
}

BandlimitedFunction BandlimitedFunction::sin_coordinate(int n, int j) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
  xi(j) = 1.0;
  return BandlimitedFunction(
      n, {{xi, Complex(0.0, -0.5)}, {-xi, Complex(0.0, 0.5)}});
}

nlohmann::json BandlimitedFunction::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["sigma"] = sigma_;
  auto& arr = j["terms"] = nlohmann::json::array();
  for (const auto& t : terms_) {
    std::vector<double> xi(t.xi.data(), t.xi.data() + t.xi.size());
    arr.push_back({{"xi", xi}, {"c", {t.c.real(), t.c.imag()}}});
  }
  return j;
}

BandlimitedFunction BandlimitedFunction::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Term> ts;
  for (const auto& tj : j.at("terms")) {
    const auto xi = tj.at("xi").get<std::vector<double>>();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = xi.at(i);
    ts.push_back({v, Complex(tj.at("c")[0].get<double>(),
                             tj.at("c")[1].get<double>())});
  }
  return BandlimitedFunction(n, std::move(ts));
}

ScalarField as_field(const BandlimitedFunction& f) {
  ScalarField s;
  s.name = "bandlimited";
  s.n = f.n();
  s.eval = [f](const Eigen::VectorXd& x) { return f(x); };
  s.partial = [f](int j, const Eigen::VectorXd& x) { return f.partial(j, x); };
  return s;
}

double divided_difference(const ScalarField& f, int j,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  if (j < 0 || j >= n)
    throw std::invalid_argument("divided_difference: coordinate out of range");
  Eigen::VectorXd hi = x, lo = x;
  for (int i = 0; i < j; ++i) { hi(i) = y(i); lo(i) = y(i); }
  lo(j) = y(j);
  const double diag_tol = 1e-7 * (1.0 + std::abs(x(j)) + std::abs(y(j)));
  if (std::abs(x(j) - y(j)) >= diag_tol)
    return (f.eval(hi) - f.eval(lo)) / (x(j) - y(j));
  // diagonal branch: partial derivative at the merged point
  Eigen::VectorXd mid = hi;
  mid(j) = 0.5 * (x(j) + y(j));
  if (f.partial) return f.partial(j, mid);
  const double h = 1e-5 * (1.0 + std::abs(mid(j)));
  Eigen::VectorXd p = mid, m = mid;
  p(j) += h;
  m(j) -= h;
  return (f.eval(p) - f.eval(m)) / (2.0 * h);
}

Matrix apply_function_complex(
    const JointEigensystem& js,
    const std::function<Complex(const Eigen::VectorXd&)>& f) {
  const int d = js.dim();
  Eigen::VectorXcd vals(d);
  for (int k = 0; k < d; ++k) vals(k) = f(js.point(k));
  return js.basis * vals.asDiagonal() * js.basis.adjoint();
}

Matrix apply_function(const JointEigensystem& js,
                      const std::function<double(const Eigen::VectorXd&)>& f) {
  Matrix m = apply_function_complex(
      js, [&f](const Eigen::VectorXd& x) { return Complex(f(x), 0.0); });
  return 0.5 * (m + m.adjoint().eval());
}

namespace {

Matrix phi_grid(const GridFunction& phi, const JointEigensystem& jsA,
                const JointEigensystem& jsB) {
  Matrix m(jsA.dim(), jsB.dim());
  for (int k = 0; k < jsA.dim(); ++k)
    for (int l = 0; l < jsB.dim(); ++l)
      m(k, l) = phi.eval(jsA.point(k), jsB.point(l));
  return m;
}

}  // namespace

Matrix doi_apply(const GridFunction& phi, const JointEigensystem& jsA,
                 const JointEigensystem& jsB, const Matrix& T) {
  if (jsA.dim() != T.rows() || jsB.dim() != T.cols())
    throw std::invalid_argument("doi_apply: dimension mismatch");
  const Matrix M = phi_grid(phi, jsA, jsB);
  const Matrix core = jsA.basis.adjoint() * T * jsB.basis;
  return jsA.basis * M.cwiseProduct(core) * jsB.basis.adjoint();
}

Matrix doi_brute(const GridFunction& phi, const JointEigensystem& jsA,
                 const JointEigensystem& jsB, const Matrix& T) {
  if (jsA.dim() != T.rows() || jsB.dim() != T.cols())
    throw std::invalid_argument("doi_brute: dimension mismatch");
  Matrix acc = Matrix::Zero(T.rows(), T.cols());
  for (int k = 0; k < jsA.dim(); ++k) {
    const Matrix Pk =
        jsA.basis.col(k) * jsA.basis.col(k).adjoint();  // rank-one projection
    for (int l = 0; l < jsB.dim(); ++l) {
      const Matrix Ql = jsB.basis.col(l) * jsB.basis.col(l).adjoint();
      acc += phi.eval(jsA.point(k), jsB.point(l)) * (Pk * T * Ql);
    }
  }
  return acc;
}

PerturbationCheck perturbation_representation(const BandlimitedFunction& f,
                                              const CommutingTuple& tA,
                                              const CommutingTuple& tB) {
  if (tA.n() != tB.n() || tA.dim() != tB.dim())
    throw std::invalid_argument(
        "perturbation_representation: tuples must share n and dim");
  const JointEigensystem jsA = joint_diagonalize(tA);
  const JointEigensystem jsB = joint_diagonalize(tB);

  PerturbationCheck out;
  out.lhs = apply_function(jsA, [&f](const Eigen::VectorXd& x) { return f(x); }) -
            apply_function(jsB, [&f](const Eigen::VectorXd& x) { return f(x); });
  out.rhs = Matrix::Zero(tA.dim(), tA.dim());
  for (int j = 0; j < tA.n(); ++j) {
    GridFunction psi_j = make_psi_grid_function(f, j);
    const Matrix diff = tA.matrices[j].entries() - tB.matrices[j].entries();
    out.rhs += doi_apply(psi_j, jsA, jsB, diff);
  }
  out.residual = operator_norm(out.lhs - out.rhs);
  return out;
}

std::pair<double, double> doi_s2_bound_check(const GridFunction& phi,
                                             const JointEigensystem& jsA,
                                             const JointEigensystem& jsB,
                                             const Matrix& T) {
  const Matrix result = doi_apply(phi, jsA, jsB, T);
  const Matrix M = phi_grid(phi, jsA, jsB);
  const double sup_phi = M.cwiseAbs().maxCoeff();
  return {result.norm(), sup_phi * T.norm()};
}

}  // namespace opfunc

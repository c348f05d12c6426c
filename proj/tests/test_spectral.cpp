#include <doctest.h>

#include <cmath>

#include "opfunc/rng.hpp"
#include "opfunc/spectral.hpp"

using namespace opfunc;

namespace {

HermitianMatrix random_hermitian(int dim, Rng& rng) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.cgaussian();
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()));
}

}  // namespace

TEST_CASE("eigh on diagonal input") {
  Eigen::VectorXd d(2);
  d << 3.0, 1.0;
  const auto [ev, u] = eigh(HermitianMatrix::diagonal(d));
  CHECK(ev(0) == doctest::Approx(1.0));
  CHECK(ev(1) == doctest::Approx(3.0));
  // U is a permutation up to phase
  CHECK(std::abs(u(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(u(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eigh Pauli-X") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const auto [ev, u] = eigh(HermitianMatrix(x));
  CHECK(ev(0) == doctest::Approx(-1.0));
  CHECK(ev(1) == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstruction residual, dims 1..32") {
  Rng rng(7);
  for (int dim : {1, 2, 3, 5, 8, 16, 32}) {
    const HermitianMatrix h = random_hermitian(dim, rng);
    const auto [ev, u] = eigh(h);
    const Matrix rec =
        u * ev.cast<std::complex<double>>().asDiagonal() * u.adjoint();
    const double norm = operator_norm(h.entries());
    CHECK(operator_norm(h.entries() - rec) <= 1e-10 * (1.0 + norm));
    for (int i = 1; i < dim; ++i) CHECK(ev(i) >= ev(i - 1));
    CHECK(operator_norm(u.adjoint() * u - Matrix::Identity(dim, dim)) <= 1e-10);
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 0.5, 1.0;
  CHECK_THROWS_AS(HermitianMatrix{m}, std::invalid_argument);
}

TEST_CASE("eigh deterministic for identical input") {
  Rng rng(11);
  const HermitianMatrix h = random_hermitian(6, rng);
  const auto [e1, u1] = eigh(h);
  const auto [e2, u2] = eigh(h);
  CHECK((e1 - e2).norm() == 0.0);
  CHECK((u1 - u2).norm() == 0.0);
}

TEST_CASE("joint_diagonalize diagonal tuple") {
  Eigen::VectorXd d1(3), d2(3);
  d1 << 1, 2, 3;
  d2 << -1, 5, 0;
  CommutingTuple t({HermitianMatrix::diagonal(d1), HermitianMatrix::diagonal(d2)});
  const JointEigensystem js = joint_diagonalize(t);
  for (int j = 0; j < 2; ++j) {
    const Matrix rec = js.basis *
                       js.spectrum.col(j).cast<std::complex<double>>().asDiagonal() *
                       js.basis.adjoint();
    CHECK(operator_norm(t.matrices[j].entries() - rec) <= 1e-8);
  }
  // spectrum points are the paired diagonals
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 3; ++k) pts.emplace_back(js.spectrum(k, 0), js.spectrum(k, 1));
  std::sort(pts.begin(), pts.end());
  CHECK(pts[0].first == doctest::Approx(1.0));
  CHECK(pts[0].second == doctest::Approx(-1.0));
  CHECK(pts[2].second == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("joint_diagonalize (A, A^2) shares eigenvectors") {
  Rng rng(3);
  const HermitianMatrix a = random_hermitian(6, rng);
  const Matrix a2 = a.entries() * a.entries();
  CommutingTuple t({a, HermitianMatrix(0.5 * (a2 + a2.adjoint().eval()))});
  const JointEigensystem js = joint_diagonalize(t);
  for (int k = 0; k < 6; ++k)
    CHECK(js.spectrum(k, 1) ==
          doctest::Approx(js.spectrum(k, 0) * js.spectrum(k, 0)).epsilon(1e-7));
}

TEST_CASE("joint_diagonalize degenerate tuple (I, I)") {
  CommutingTuple t({HermitianMatrix(Matrix::Identity(4, 4)),
                    HermitianMatrix(Matrix::Identity(4, 4))});
  const JointEigensystem js = joint_diagonalize(t);
  for (int j = 0; j < 2; ++j) {
    const Matrix rec = js.basis *
                       js.spectrum.col(j).cast<std::complex<double>>().asDiagonal() *
                       js.basis.adjoint();
    CHECK(operator_norm(Matrix::Identity(4, 4) - rec) <= 1e-8);
  }
}

TEST_CASE("joint_diagonalize ground-truth tuples with eigenvalue collisions") {
  Rng rng(17);
  for (int dim : {2, 4, 8}) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix u = qr.householderQ();
    std::vector<HermitianMatrix> ms;
    const int n = 3;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd lambda(dim);
      for (int k = 0; k < dim; ++k)
        lambda(k) = std::floor(rng.uniform(-2.0, 2.0));  // forced collisions
      Matrix a = u * lambda.cast<std::complex<double>>().asDiagonal() * u.adjoint();
      ms.emplace_back(0.5 * (a + a.adjoint().eval()));
    }
    CommutingTuple t(ms, 1e-8);
    const JointEigensystem js = joint_diagonalize(t);
    for (int j = 0; j < n; ++j) {
      const Matrix rec =
          js.basis *
          js.spectrum.col(j).cast<std::complex<double>>().asDiagonal() *
          js.basis.adjoint();
      CHECK(operator_norm(ms[j].entries() - rec) <= 1e-8);
    }
  }
}

TEST_CASE("joint_diagonalize rejects non-commuting tuples naming the pair") {
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK_THROWS_WITH_AS(
      CommutingTuple({HermitianMatrix(x), HermitianMatrix(z)}, 1e-8),
      doctest::Contains("worst pair (0,1)"), std::invalid_argument);
}

TEST_CASE("singular values") {
  Eigen::VectorXd d(2);
  d << 3.0, -4.0;
  const RealVector s = singular_values(HermitianMatrix::diagonal(d).entries());
  CHECK(s(0) == doctest::Approx(4.0));
  CHECK(s(1) == doctest::Approx(3.0));

  Rng rng(5);
  Eigen::VectorXcd u(4), v(4);
  for (int i = 0; i < 4; ++i) { u(i) = rng.cgaussian(); v(i) = rng.cgaussian(); }
  u.normalize();
  v.normalize();
  const RealVector s1 = singular_values(u * v.adjoint());
  CHECK(s1(0) == doctest::Approx(1.0));
  CHECK(s1(1) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix t(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t(i, j) = rng.cgaussian();
  const RealVector sv = singular_values(t);
  CHECK(sv.squaredNorm() == doctest::Approx(t.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("schatten norms") {
  Eigen::VectorXd d(2);
  d << 3.0, 4.0;
  const Matrix t = HermitianMatrix::diagonal(d).entries();
  CHECK(schatten_norm(t, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(t, 1.0) == doctest::Approx(7.0));
  CHECK(schatten_norm(t, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(4.0));
  CHECK_THROWS_AS(schatten_norm(t, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(schatten_norm(t, -1.0), std::invalid_argument);

  // p = 4 against the direct singular-value sum
  Rng rng(9);
  Matrix r(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r(i, j) = rng.cgaussian();
  const RealVector s = singular_values(r);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += std::pow(s(i), 4.0);
  CHECK(schatten_norm(r, 4.0) == doctest::Approx(std::pow(acc, 0.25)));
}

TEST_CASE("schatten norm monotone nonincreasing in p; triangle; Frobenius") {
  Rng rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    Matrix a(6, 6), b(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) { a(i, j) = rng.cgaussian(); b(i, j) = rng.cgaussian(); }
    const double inf = std::numeric_limits<double>::infinity();
    double prev = schatten_norm(a, 1.0);
    for (double p : {2.0, 4.0, inf}) {
      const double cur = schatten_norm(a, p);
      CHECK(cur <= prev + 1e-10);
      prev = cur;
    }
    for (double p : {1.0, 2.0, 4.0, inf})
      CHECK(schatten_norm(a + b, p) <=
            schatten_norm(a, p) + schatten_norm(b, p) + 1e-9);
    double frob2 = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) frob2 += std::norm(a(i, j));
    CHECK(schatten_norm(a, 2.0) * schatten_norm(a, 2.0) ==
          doctest::Approx(frob2));
  }
}

TEST_CASE("commutation defect") {
  Eigen::VectorXd d1(2), d2(2);
  d1 << 1, 2;
  d2 << 3, 4;
  CHECK(commutation_defect({HermitianMatrix::diagonal(d1),
                            HermitianMatrix::diagonal(d2)}) == 0.0);
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  // [X, Z] = XZ - ZX has operator norm 2
  CHECK(commutation_defect({HermitianMatrix(x), HermitianMatrix(z)}) ==
        doctest::Approx(2.0));
  Rng rng(2);
  const HermitianMatrix a = random_hermitian(4, rng);
  CHECK(commutation_defect({a, a}) <= 1e-14);
}

TEST_CASE("matrix json round trip") {
  Rng rng(4);
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.cgaussian();
  const Matrix back = matrix_from_json(matrix_to_json(m));
  CHECK((m - back).norm() == 0.0);
}

#include <doctest.h>

#include <cmath>

#include "opfunc/calculus.hpp"
#include "opfunc/experiment.hpp"
#include "opfunc/rng.hpp"

using namespace opfunc;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Finite-difference oracle for partial derivatives.
double fd_partial(const std::function<double(const Eigen::VectorXd&)>& f,
                  int j, Eigen::VectorXd x) {
  const double h = 1e-6;
  Eigen::VectorXd xp = x, xm = x;
  xp(j) += h;
  xm(j) -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

}  // namespace

TEST_CASE("bandlimited: sin coordinate") {
  const BandlimitedFunction f = BandlimitedFunction::sin_coordinate(2, 1);
  CHECK(f.n() == 2);
  CHECK(f.sigma() == doctest::Approx(1.0));
  CHECK(f(vec({0.3, 0.7})) == doctest::Approx(std::sin(0.7)));
  CHECK(f.partial(1, vec({0.3, 0.7})) == doctest::Approx(std::cos(0.7)));
  CHECK(f.partial(0, vec({0.3, 0.7})) == doctest::Approx(0.0));
  CHECK(f.linf_bound() == doctest::Approx(1.0));
}

TEST_CASE("bandlimited: rejects unpaired frequencies") {
  std::vector<BandlimitedFunction::Term> terms;
  terms.push_back({vec({1.0}), Complex(0.5, 0.5)});
  CHECK_THROWS_AS(BandlimitedFunction(1, terms), std::invalid_argument);
  terms.push_back({vec({0.0}), Complex(0.0, 1.0)});  // imaginary constant
  CHECK_THROWS_AS(BandlimitedFunction(1, terms), std::invalid_argument);
}

TEST_CASE("bandlimited: random sums are real with analytic partials") {
  Rng rng(101);
  for (int n : {1, 2, 3}) {
    const BandlimitedFunction f = BandlimitedFunction::random(n, 3.0, 6, rng);
    CHECK(f.sigma() <= 3.0 + 1e-12);
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd x(n);
      for (int j = 0; j < n; ++j) x(j) = rng.uniform(-5.0, 5.0);
      CHECK(std::abs(f.eval_complex(x).imag()) <= 1e-12 * (1 + f.linf_bound()));
      CHECK(std::abs(f(x)) <= f.linf_bound() + 1e-12);
      for (int j = 0; j < n; ++j)
        CHECK(f.partial(j, x) ==
              doctest::Approx(fd_partial([&](const Eigen::VectorXd& z) {
                return f(z);
              }, j, x)).epsilon(1e-5));
    }
  }
}

TEST_CASE("bandlimited: dilation scales argument and bandwidth") {
  Rng rng(103);
  const BandlimitedFunction f = BandlimitedFunction::random(2, 2.0, 4, rng);
  const BandlimitedFunction g = f.dilate(0.5);
  CHECK(g.sigma() == doctest::Approx(0.5 * f.sigma()));
  const Eigen::VectorXd x = vec({1.1, -0.4});
  CHECK(g(x) == doctest::Approx(f(0.5 * x)));
}

TEST_CASE("bandlimited json round trip") {
  Rng rng(104);
  const BandlimitedFunction f = BandlimitedFunction::random(2, 2.0, 5, rng);
  const BandlimitedFunction g = BandlimitedFunction::from_json(f.to_json());
  const Eigen::VectorXd x = vec({0.2, -1.7});
  CHECK(f(x) == g(x));
  CHECK(f.sigma() == g.sigma());
}

TEST_CASE("divided difference: matches quotient off the diagonal") {
  // f(x) = x1^... trig: use sin(x_0) in n=2; delta_0 f and delta_1 f have
  // explicit forms once coordinates are substituted left to right.
  const ScalarField f = as_field(BandlimitedFunction::sin_coordinate(2, 0));
  const Eigen::VectorXd x = vec({1.0, 2.0}), y = vec({-0.5, 0.3});
  // j = 0: (f(x) - f(y0, x1)) / (x0 - y0) with no substitutions yet
  CHECK(divided_difference(f, 0, x, y) ==
        doctest::Approx((std::sin(1.0) - std::sin(-0.5)) / 1.5));
  // j = 1: coordinate 0 already swapped to y in both terms; f ignores x1,
  // so the quotient vanishes
  CHECK(divided_difference(f, 1, x, y) == doctest::Approx(0.0));
}

TEST_CASE("divided difference: near-diagonal uses the derivative") {
  const ScalarField f = as_field(BandlimitedFunction::sin_coordinate(1, 0));
  const Eigen::VectorXd x = vec({0.7});
  CHECK(divided_difference(f, 0, x, x) == doctest::Approx(std::cos(0.7)));
  const Eigen::VectorXd y = vec({0.7 + 1e-9});
  CHECK(divided_difference(f, 0, x, y) ==
        doctest::Approx(std::cos(0.7)).epsilon(1e-6));
}

TEST_CASE("divided difference: telescoping identity") {
  // f(x) - f(y) = sum_j (x_j - y_j) delta_j f(x, y) holds exactly by
  // construction of the substitution order.
  Rng rng(105);
  for (int n : {1, 2, 3}) {
    const BandlimitedFunction bf = BandlimitedFunction::random(n, 2.0, 5, rng);
    const ScalarField f = as_field(bf);
    for (int rep = 0; rep < 30; ++rep) {
      Eigen::VectorXd x(n), y(n);
      for (int j = 0; j < n; ++j) {
        x(j) = rng.uniform(-4.0, 4.0);
        y(j) = rng.uniform(-4.0, 4.0);
      }
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += (x(j) - y(j)) * divided_difference(f, j, x, y);
      CHECK(s == doctest::Approx(bf(x) - bf(y)).epsilon(1e-9));
    }
  }
}

TEST_CASE("apply_function reproduces polynomial calculus") {
  // f(lambda) = lambda^2 on a single matrix must equal A^2.
  const CommutingTuple t = gen_commuting_tuple(6, 1, 2.0, 41);
  const JointEigensystem js = joint_diagonalize(t);
  const Matrix sq = apply_function(
      js, [](const Eigen::VectorXd& l) { return l(0) * l(0); });
  const Matrix a = t.matrices[0].entries();
  CHECK(operator_norm(sq - a * a) <= 1e-10 * (1 + operator_norm(a * a)));
}

TEST_CASE("doi_apply equals brute-force projection sum") {
  Rng rng(106);
  for (int dim : {2, 4, 6}) {
    for (int n : {1, 2}) {
      const CommutingTuple tA = gen_commuting_tuple(dim, n, 2.0, rng.next_u64());
      const CommutingTuple tB = gen_commuting_tuple(dim, n, 2.0, rng.next_u64());
      const JointEigensystem jsA = joint_diagonalize(tA);
      const JointEigensystem jsB = joint_diagonalize(tB);
      Matrix T(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) T(i, j) = rng.cgaussian();
      GridFunction phi;
      phi.name = "test";
      phi.n = n;
      phi.eval = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return Complex(std::cos(x.sum()), std::sin(y.sum()));
      };
      const Matrix fast = doi_apply(phi, jsA, jsB, T);
      const Matrix slow = doi_brute(phi, jsA, jsB, T);
      CHECK(operator_norm(fast - slow) <= 1e-10 * (1 + operator_norm(slow)));
    }
  }
}

TEST_CASE("doi with constant symbol 1 is the identity map") {
  Rng rng(107);
  const CommutingTuple tA = gen_commuting_tuple(5, 2, 2.0, 51);
  const CommutingTuple tB = gen_commuting_tuple(5, 2, 2.0, 52);
  const JointEigensystem jsA = joint_diagonalize(tA);
  const JointEigensystem jsB = joint_diagonalize(tB);
  Matrix T(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) T(i, j) = rng.cgaussian();
  GridFunction one;
  one.name = "one";
  one.n = 2;
  one.eval = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Complex(1.0, 0.0);
  };
  CHECK(operator_norm(doi_apply(one, jsA, jsB, T) - T) <= 1e-12 * operator_norm(T));
}

TEST_CASE("doi is linear in the symbol and in T") {
  Rng rng(108);
  const CommutingTuple tA = gen_commuting_tuple(4, 1, 2.0, 61);
  const CommutingTuple tB = gen_commuting_tuple(4, 1, 2.0, 62);
  const JointEigensystem jsA = joint_diagonalize(tA);
  const JointEigensystem jsB = joint_diagonalize(tB);
  Matrix T1(4, 4), T2(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T1(i, j) = rng.cgaussian();
      T2(i, j) = rng.cgaussian();
    }
  GridFunction p1, p2, sum;
  p1.n = p2.n = sum.n = 1;
  p1.eval = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
    return Complex(x(0), 0.0);
  };
  p2.eval = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
    return Complex(0.0, y(0));
  };
  sum.eval = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return p1.eval(x, y) + 2.0 * p2.eval(x, y);
  };
  const Matrix lhs = doi_apply(sum, jsA, jsB, T1 + T2);
  const Matrix rhs = doi_apply(p1, jsA, jsB, T1) + doi_apply(p1, jsA, jsB, T2) +
                     2.0 * (doi_apply(p2, jsA, jsB, T1) +
                            doi_apply(p2, jsA, jsB, T2));
  CHECK(operator_norm(lhs - rhs) <= 1e-10 * (1 + operator_norm(rhs)));
}

TEST_CASE("doi S2 contraction") {
  Rng rng(109);
  for (int rep = 0; rep < 10; ++rep) {
    const CommutingTuple tA = gen_commuting_tuple(5, 1, 3.0, rng.next_u64());
    const CommutingTuple tB = gen_commuting_tuple(5, 1, 3.0, rng.next_u64());
    Matrix T(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) T(i, j) = rng.cgaussian();
    GridFunction phi;
    phi.n = 1;
    phi.eval = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
      return Complex(std::sin(x(0) * y(0)), std::cos(x(0) - y(0)));
    };
    const auto [lhs, rhs] =
        doi_s2_bound_check(phi, joint_diagonalize(tA), joint_diagonalize(tB), T);
    CHECK(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("perturbation representation is exact on small instances") {
  Rng rng(110);
  for (int n : {1, 2}) {
    const BandlimitedFunction f = BandlimitedFunction::random(n, 2.0, 4, rng);
    const PerturbedPair pp = gen_perturbed_pair(
        6, n, 0.1, PerturbMode::kBasisRotate, rng.next_u64());
    const PerturbationCheck chk = perturbation_representation(f, pp.a, pp.b);
    const double scale = 1.0 + operator_norm(chk.lhs);
    CHECK(chk.residual <= 1e-8 * scale);
  }
}

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "korn/catalog.hpp"
#include "korn/classify.hpp"
#include "korn/error.hpp"
#include "korn/linalg.hpp"
#include "korn/symbol.hpp"

using namespace korn;

namespace {

Eigen::VectorXd unit_xi(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd xi(n);
  for (int i = 0; i < n; ++i) xi(i) = g(rng);
  return xi.normalized();
}

OperatorSpec partial(int n, int j) {
  OperatorSpec::Coeffs c;
  MultiIndex a(n, 0);
  a[j] = 1;
  c[a] = Eigen::MatrixXd::Ones(1, 1);
  return OperatorSpec(n, 1, 1, 1, c);
}

}  // namespace

TEST_CASE("multi-index helpers") {
  CHECK(multi_indices(2, 3).size() == 4);
  CHECK(multi_indices(3, 2).size() == 6);
  CHECK(multi_indices(4, 3).size() == 20);
  CHECK(multi_indices(3, 2).front() == MultiIndex{2, 0, 0});
  CHECK(multi_indices_upto(2, 2).size() == 6);
  CHECK(degree({1, 2, 0}) == 3);
  CHECK(factorial({2, 3}) == doctest::Approx(12.0));
  Eigen::VectorXd xi(2);
  xi << 2.0, 3.0;
  CHECK(monomial({2, 1}, xi) == doctest::Approx(12.0));
  CHECK(to_string(MultiIndex{1, 0, 2}) == "(1,0,2)");
}

TEST_CASE("operator construction rejects mismatched coefficients") {
  OperatorSpec::Coeffs c;
  c[{1, 0}] = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(OperatorSpec(2, 1, 2, 1, c), DimensionError);
  OperatorSpec::Coeffs d;
  d[{2, 0}] = Eigen::MatrixXd::Ones(1, 1);
  CHECK_THROWS_AS(OperatorSpec(2, 1, 1, 1, d), DimensionError);
}

TEST_CASE("symbol evaluation") {
  OperatorSpec lap = catalog_operator("laplacian(3)").spec;
  Eigen::VectorXd xi(3);
  xi << 1.0, -2.0, 0.5;
  CHECK(lap.eval(xi)(0, 0) == doctest::Approx(xi.squaredNorm()));

  // divergence: row vector xi^T
  OperatorSpec div = catalog_operator("divergence(3)").spec;
  Eigen::MatrixXd s = div.eval(xi);
  REQUIRE(s.rows() == 1);
  REQUIRE(s.cols() == 3);
  CHECK((s.transpose() - xi).norm() < 1e-15);
}

TEST_CASE("adjoint is an involution with sign (-1)^k") {
  for (const char* ref : {"gradient(2)", "sym_gradient(3)", "grad_k(2,2)", "bilaplacian(2)"}) {
    OperatorSpec a = catalog_operator(ref).spec;
    OperatorSpec aa = adjoint(adjoint(a));
    Eigen::VectorXd xi = unit_xi(a.n(), 3);
    CHECK((aa.eval(xi) - a.eval(xi)).norm() < 1e-14);
    double sign = a.order() % 2 ? -1.0 : 1.0;
    CHECK((adjoint(a).eval(xi) - sign * a.eval(xi).transpose()).norm() < 1e-14);
  }
}

TEST_CASE("composition multiplies symbols") {
  OperatorSpec div = catalog_operator("divergence(2)").spec;
  OperatorSpec grad = catalog_operator("gradient(2)").spec;
  OperatorSpec lap = catalog_operator("laplacian(2)").spec;
  OperatorSpec dg = compose(div, grad);
  CHECK(dg.order() == 2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Eigen::VectorXd xi = unit_xi(2, s);
    CHECK(dg.eval(xi)(0, 0) == doctest::Approx(lap.eval(xi)(0, 0)));
  }
  CHECK_THROWS_AS(compose(grad, grad), DimensionError);

  // d_x d_y - d_y d_x cancels to the zero operator
  OperatorSpec c = add(compose(partial(2, 0), partial(2, 1)), scaled(compose(partial(2, 1), partial(2, 0)), -1.0));
  CHECK(c.is_zero());
}

TEST_CASE("power and generalized Laplacian") {
  OperatorSpec lap = catalog_operator("laplacian(2)").spec;
  OperatorSpec bil = catalog_operator("bilaplacian(2)").spec;
  Eigen::VectorXd xi = unit_xi(2, 11) * 1.7;
  CHECK(power(lap, 2).eval(xi)(0, 0) == doctest::Approx(bil.eval(xi)(0, 0)));

  OperatorSpec eps = catalog_operator("sym_gradient(3)").spec;
  Eigen::VectorXd x3 = unit_xi(3, 5);
  Eigen::MatrixXd a = eps.eval(x3);
  OperatorSpec gl = generalized_laplacian(eps);
  CHECK(gl.order() == 2);
  CHECK((gl.eval(x3) - a.transpose() * a).norm() < 1e-14);
  CHECK((symbol_transpose(eps).eval(x3) - a.transpose()).norm() < 1e-15);
}

TEST_CASE("pseudo-inverse oracles") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 3);
  d(0, 0) = 3.0;
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 2);
  want(0, 0) = 1.0 / 3.0;
  CHECK((pinv(d) - want).norm() < 1e-15);

  // rank one u v^T has pseudo-inverse v u^T / (|u|^2 |v|^2)
  Eigen::Vector3d u(1.0, 2.0, -1.0);
  Eigen::Vector2d v(0.5, 4.0);
  Eigen::MatrixXd m = u * v.transpose();
  Eigen::MatrixXd p = v * u.transpose() / (u.squaredNorm() * v.squaredNorm());
  CHECK((pinv(m) - p).norm() < 1e-14);
  CHECK(numerical_rank(m) == 1);
  CHECK((image_projector(m) - u * u.transpose() / u.squaredNorm()).norm() < 1e-14);
  CHECK(mp_defect(m, pinv(m)) < 1e-14);
  CHECK(mp_defect(m, p * 2.0) > 0.1);

  Eigen::MatrixXcd z(2, 2);
  z << std::complex<double>(1, 1), 0, 0, 0;
  Eigen::MatrixXcd zp = pinv(z);
  CHECK(std::abs(zp(0, 0) - std::complex<double>(0.5, -0.5)) < 1e-15);
  CHECK(std::abs(zp(1, 1)) < 1e-15);

  // round-off-sized matrices have rank 0 under an absolute floor
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Constant(2, 2, 1e-20);
  CHECK(numerical_rank(tiny) == 1);
  CHECK(numerical_rank(tiny, kRankTol, 1e-14) == 0);
  CHECK(pinv(tiny, kRankTol, 1e-14).norm() == 0.0);
}

TEST_CASE("sphere samples are deterministic unit vectors") {
  SamplingConfig cfg;
  cfg.quasi_uniform = 20;
  cfg.random = 20;
  auto a = sphere_samples(3, cfg);
  auto b = sphere_samples(3, cfg);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].norm() == doctest::Approx(1.0));
    CHECK((a[i] - b[i]).norm() == 0.0);
  }
  cfg.seed += 1;
  auto c = sphere_samples(3, cfg);
  CHECK((a.back() - c.back()).norm() > 0.0);
}

TEST_CASE("classify basics") {
  Classification lap = classify(catalog_operator("laplacian(2)").spec);
  CHECK(lap.is_elliptic);
  CHECK(lap.is_elliptic_system);
  CHECK(lap.is_maximal_rank);
  CHECK_FALSE(lap.is_canceling);
  CHECK(lap.essential_range_dim == 1);

  Classification grad = classify(catalog_operator("gradient(3)").spec);
  CHECK(grad.is_elliptic);
  CHECK_FALSE(grad.is_maximal_rank);
  CHECK(grad.is_canceling);
  CHECK(grad.essential_range_dim == 3);
  CHECK(grad.cancellation_dim == 0);

  // divergence: symbol onto R for every xi, not injective
  Classification div = classify(catalog_operator("divergence(2)").spec);
  CHECK_FALSE(div.is_elliptic);
  CHECK(div.is_maximal_rank);
  CHECK(div.min_singular_on_sphere == 0.0);

  CHECK_THROWS_AS(classify(OperatorSpec()), PreconditionError);
}

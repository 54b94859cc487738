#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "korn/catalog.hpp"
#include "korn/discretization.hpp"
#include "korn/domain.hpp"
#include "korn/error.hpp"
#include "korn/multiplier.hpp"
#include "korn/norms.hpp"
#include "korn/random_field.hpp"
#include "korn/solver.hpp"

using namespace korn;
using std::numbers::pi;

namespace {

// O(N^2) DFT of one component, sign -1
std::vector<cplx> naive_dft(const GridField& f, int c) {
  const BoxGrid& g = f.grid();
  std::vector<cplx> out(g.num_points());
  std::vector<int> m(g.n()), x(g.n());
  for (std::size_t k = 0; k < g.num_points(); ++k) {
    g.unravel(k, m.data());
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      g.unravel(i, x.data());
      double ph = 0.0;
      for (int d = 0; d < g.n(); ++d) ph += double(m[d]) * x[d];
      s += f.at(i, c) * std::polar(1.0, -2.0 * pi * ph / g.size());
    }
    out[k] = s;
  }
  return out;
}

double masked_rel(const GridField& a, const GridField& b, const DomainMask& m) {
  double num = 0.0, den = 0.0;
  for (std::size_t i : m.indices())
    for (int c = 0; c < a.dim(); ++c) {
      num += std::norm(a.at(i, c) - b.at(i, c));
      den += std::norm(b.at(i, c));
    }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("paired real transforms match a naive DFT") {
  BoxGrid g(2, 8);
  GridField f = random_band_limited(g, 3, 3, 42);
  // make it rough so every frequency is populated
  for (std::size_t i = 0; i < g.num_points(); ++i) f.at(i, 1) += std::sin(1.0 + 7.0 * i);
  GridField s = to_spectrum(f);
  for (int c = 0; c < 3; ++c) {
    auto ref = naive_dft(f, c);
    for (std::size_t k = 0; k < g.num_points(); ++k) CHECK(std::abs(s.at(k, c) - ref[k]) < 1e-12);
  }
  GridField back = from_spectrum(s, true);
  for (std::size_t i = 0; i < f.data().size(); ++i) CHECK(std::abs(back.data()[i] - f.data()[i]) < 1e-13);
  CHECK(back.is_real());

  const auto& mir = mirror_indices(g);
  std::vector<int> j(2), jm(2);
  for (std::size_t k = 0; k < g.num_points(); ++k) {
    g.unravel(k, j.data());
    g.unravel(mir[k], jm.data());
    for (int d = 0; d < 2; ++d) CHECK((j[d] + jm[d]) % 8 == 0);
  }
}

TEST_CASE("one-dimensional and complex transforms") {
  BoxGrid g(1, 16);
  GridField f(g, 1, false);
  for (std::size_t i = 0; i < 16; ++i) f.at(i, 0) = cplx(std::cos(0.3 * i), std::sin(1.1 * i));
  GridField s = to_spectrum(f);
  auto ref = naive_dft(f, 0);
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(s.at(k, 0) - ref[k]) < 1e-12);
  GridField b = from_spectrum(s, false);
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(b.at(i, 0) - f.at(i, 0)) < 1e-14);
}

TEST_CASE("wavenumbers") {
  BoxGrid g(1, 16, 2.0);
  auto ks = axis_wavenumbers(g, Discretization::spectral());
  CHECK(ks[0] == 0.0);
  CHECK(ks[8] == 0.0);
  CHECK(ks[3] == doctest::Approx(2.0 * pi * 3 / 2.0));
  CHECK(ks[13] == doctest::Approx(-2.0 * pi * 3 / 2.0));
  // second-order central: sin(theta) / h
  auto k2 = axis_wavenumbers(g, Discretization::central(2));
  double h = g.spacing();
  CHECK(k2[3] == doctest::Approx(std::sin(2.0 * pi * 3 / 16) / h));
  auto k4 = axis_wavenumbers(g, Discretization::central(4));
  double th = 2.0 * pi * 3 / 16;
  CHECK(k4[3] == doctest::Approx((8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * h)));
}

TEST_CASE("finite-difference weights") {
  auto w2 = central_first_derivative(2);
  REQUIRE(w2.size() == 3);
  CHECK(w2[0] == doctest::Approx(-0.5));
  CHECK(w2[2] == doctest::Approx(0.5));
  auto w4 = central_first_derivative(4);
  REQUIRE(w4.size() == 5);
  CHECK(w4[0] == doctest::Approx(1.0 / 12));
  CHECK(w4[1] == doctest::Approx(-2.0 / 3));
  CHECK(w4[2] == doctest::Approx(0.0));
  auto d2 = fd_weights(2, {-1.0, 0.0, 1.0});
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  CHECK(parse_discretization("central6").stencil_order == 6);
  CHECK(parse_discretization("spectral").scheme == Scheme::spectral);
  CHECK_THROWS_AS(parse_discretization("central3"), ConfigError);
  CHECK(to_string(Discretization::central(4)) == "central4");
}

TEST_CASE("central multiplier agrees with the stencil away from the box edge") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("square", 2));
  for (const char* ref : {"laplacian(2)", "cauchy_riemann", "div_k(2,3)"}) {
    CAPTURE(ref);
    OperatorSpec a = catalog_operator(ref).spec;
    GridField u = random_band_limited(g, a.dim_v(), 6, 3);
    GridField viaf = apply_operator(a, u, Discretization::central(4));
    GridField vias = fd_apply(a, u, m.indices(), 4);
    CHECK(masked_rel(viaf, vias, m) < 1e-12);
  }
}

TEST_CASE("Nyquist corners") {
  CHECK(nyquist_corners(BoxGrid(1, 8)).size() == 1);
  CHECK(nyquist_corners(BoxGrid(2, 8)).size() == 3);
  CHECK(nyquist_corners(BoxGrid(3, 8)).size() == 7);
}

TEST_CASE("pseudo-inverse tables map real data to real data") {
  BoxGrid g(2, 16);
  for (const char* ref : {"laplacian(2)", "cauchy_riemann", "div_k(2,3)"}) {
    OperatorSpec a = catalog_operator(ref).spec;
    for (auto d : {Discretization::spectral(), Discretization::central(4)}) {
      MultiplierTable t = build_pinv_multiplier(a, g, d);
      CHECK(conjugate_asymmetry(t) < 1e-14);
      CHECK(t.real_block(0).norm() == 0.0);
    }
  }
}

TEST_CASE("solver is exact on the mask") {
  BoxGrid g(2, 64);
  for (const char* fam : {"disk", "two_ball"}) {
    DomainMask m = make_domain(g, standard_shape(fam, 2));
    for (const char* ref : {"laplacian(2)", "cauchy_riemann", "deviatoric(2)"}) {
      CAPTURE(ref);
      OperatorSpec a = catalog_operator(ref).spec;
      GridField f = random_band_limited(g, a.dim_w(), 6, 17);
      SolveResult r = solve(a, f, m);
      CHECK(r.residual < 1e-12);
      // independent residual from the discrete operator
      GridField av = apply_operator(a, r.v, Discretization::spectral());
      CHECK(masked_rel(av, f, m) < 1e-12);
    }
  }
}

TEST_CASE("constant data is carried by the polynomial part") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec lap = catalog_operator("laplacian(2)").spec;
  GridField f(g, 1);
  for (std::size_t i = 0; i < g.num_points(); ++i) f.at(i, 0) = 3.0;
  SolveResult r = solve(lap, f, m);
  CHECK(r.residual < 1e-11);
  CHECK_FALSE(r.v.poly.empty());
  CHECK(r.polynomial_residual < 1e-12);
  // the mean of the extended data is 3 * |mask| / |box|
  CHECK(r.mean(0) == doctest::Approx(3.0 * m.volume()).epsilon(1e-12));
}

TEST_CASE("operators without maximal rank are refused") {
  BoxGrid g(2, 32);
  CHECK_THROWS_AS(SpectralSolver(catalog_operator("gradient(2)").spec, g), PreconditionError);
  CHECK_THROWS_AS(SpectralSolver(catalog_operator("sym_gradient(2)").spec, g), PreconditionError);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  SpectralSolver s(catalog_operator("laplacian(2)").spec, g);
  CHECK_THROWS_AS(s.solve(GridField(g, 2), m), DimensionError);
}

TEST_CASE("spectral derivatives of a sine") {
  BoxGrid g(2, 32);
  GridField u(g, 1);
  std::vector<int> j(2);
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    g.unravel(i, j.data());
    u.at(i, 0) = std::sin(2.0 * pi * 3 * j[0] * g.spacing());
  }
  Differentiator d(BoxField(u), Discretization::spectral());
  GridField dx = d.derivative({1, 0});
  GridField dy = d.derivative({0, 1});
  double err = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    g.unravel(i, j.data());
    err = std::max(err, std::abs(dx.at(i, 0) - 6.0 * pi * std::cos(6.0 * pi * j[0] * g.spacing())));
    err = std::max(err, std::abs(dy.at(i, 0)));
  }
  CHECK(err < 1e-11);
}

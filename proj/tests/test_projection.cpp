#include <doctest.h>

#include <cmath>

#include "korn/catalog.hpp"
#include "korn/domain.hpp"
#include "korn/error.hpp"
#include "korn/norms.hpp"
#include "korn/projection.hpp"
#include "korn/random_field.hpp"

using namespace korn;

namespace {

double l2(const GridField& f, const DomainMask& m) { return lp_norm(f, m, 2.0).value; }

double diff_l2(const GridField& a, const GridField& b, const DomainMask& m) {
  GridField d = a;
  d -= b;
  return l2(d, m);
}

// T u on one grid: relative idempotence defect and kernel residual
struct Defects {
  double idem, kernel;
};

Defects defects(const char* ref, int size, int band) {
  BoxGrid g(2, size);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec a = catalog_operator(ref).spec;
  ProjectionOptions po;
  po.compute_norms = false;
  po.residual_margin = interior_radius(a.order(), 4) * size / 64;
  KornProjector t(a, g, po);
  GridField spec = random_band_limited_spectrum(g, a.dim_v(), band, 5);
  ProjectionResult r1 = t.project_spectrum(spec, m);
  GridField at = fd_apply(a, r1.t_box, m.indices(), 4);
  ProjectionResult r2 = t.project(r1.t_box, at, m);
  return {diff_l2(r2.t_u, r1.t_u, m) / l2(r1.w.sample(), m), r1.kernel_residual.value / l2(r1.au, m)};
}

}  // namespace

TEST_CASE("fields already in the kernel are fixed") {
  BoxGrid g(2, 64);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec lap = catalog_operator("laplacian(2)").spec;
  Polynomial p(2, 1, m.centroid());
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  p.add_term({2, 0}, one);
  p.add_term({0, 2}, -one);
  p.add_term({1, 0}, 0.5 * one);
  BoxField u;
  u.periodic = GridField(g, 1);
  u.poly = p;
  KornProjector t(lap, g);
  ProjectionResult r = t.project(u, m);
  GridField us = u.sample();
  CHECK(diff_l2(r.t_u, us, m) < 1e-12 * l2(us, m));
  CHECK(l2(r.au, m) < 1e-12);
}

TEST_CASE("decomposition u = T u + w on the mask") {
  BoxGrid g(2, 64);
  for (const char* fam : {"disk", "two_ball", "square"}) {
    DomainMask m = make_domain(g, standard_shape(fam, 2));
    for (const char* ref : {"cauchy_riemann", "divergence(2)", "div_k(2,2)"}) {
      CAPTURE(fam);
      CAPTURE(ref);
      OperatorSpec a = catalog_operator(ref).spec;
      KornProjector t(a, g);
      BoxField u(random_band_limited(g, a.dim_v(), 6, 9));
      ProjectionResult r = t.project(u, m);
      GridField sum = r.t_u;
      sum += r.w.sample();
      GridField us = u.sample();
      CHECK(diff_l2(sum, us, m) < 1e-12 * l2(us, m));
      // T u vanishes off the mask
      double off = 0.0;
      for (std::size_t i = 0; i < g.num_points(); ++i)
        if (!m.contains(i))
          for (int c = 0; c < r.t_u.dim(); ++c) off = std::max(off, std::abs(r.t_u.at(i, c)));
      CHECK(off == 0.0);
    }
  }
}

TEST_CASE("idempotence and kernel residual converge at the stencil order") {
  for (const char* ref : {"laplacian(2)", "cauchy_riemann", "bilaplacian(2)"}) {
    CAPTURE(ref);
    Defects c = defects(ref, 64, 4);
    Defects f = defects(ref, 128, 4);
    CHECK(c.idem / f.idem > 10.0);
    CHECK(c.kernel / f.kernel > 10.0);
    CHECK(f.idem <= stencil_tolerance(4, 4, 128));
  }
}

TEST_CASE("caller-supplied A u must match") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec lap = catalog_operator("laplacian(2)").spec;
  KornProjector t(lap, g);
  BoxField u(random_band_limited(g, 1, 4, 2));
  GridField au = apply_operator(lap, u, Discretization::spectral());
  CHECK_NOTHROW(t.project(u, au, m));
  au *= 2.0;
  CHECK_THROWS_AS(t.project(u, au, m), PreconditionError);
  CHECK_THROWS_AS(KornProjector(catalog_operator("gradient(2)").spec, g), PreconditionError);
}

TEST_CASE("helmholtz_decompose matches the projector") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec cr = catalog_operator("cauchy_riemann").spec;
  GridField u = random_band_limited(g, 2, 4, 3);
  GridField au = apply_operator(cr, u, Discretization::central(4));
  HelmholtzParts h = helmholtz_decompose(cr, u, au, m);
  ProjectionResult r = korn_project(cr, u, au, m);
  CHECK(diff_l2(h.v, r.t_u, m) < 1e-14 * l2(u, m));
}

TEST_CASE("weak projection") {
  BoxGrid g(2, 64);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  for (const char* ref : {"grad_curl(2)"}) {
    AnnihilatorPair p = catalog_annihilator(ref);
    CHECK(delta_w_closed_form_error(p, g) < 1e-13);
    WeakKornProjector wp(p, g);
    BoxField u(random_band_limited(g, p.a.dim_v(), 6, 4));
    ProjectionResult r = wp.project(u, m);
    GridField sum = r.t_u;
    sum += r.w.sample();
    GridField us = u.sample();
    CHECK(diff_l2(sum, us, m) < 1e-10 * l2(us, m));
    CHECK(r.kernel_residual.cells > 0);
  }
  AnnihilatorPair bad{catalog_operator("gradient(2)").spec, catalog_operator("divergence(2)").spec, "bad"};
  CHECK_THROWS_AS(WeakKornProjector(bad, g), PreconditionError);
}

TEST_CASE("empirical constants do not depend on the thread count") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec cr = catalog_operator("cauchy_riemann").spec;
  ConstantOptions co;
  co.projection.ps = {1.5, 2.0};
  EnsembleConfig ens;
  ens.samples = 8;
  ens.band = 4;
  co.threads = 1;
  ConstantReport a = empirical_constant(cr, g, m, co, ens);
  co.threads = 3;
  ConstantReport b = empirical_constant(cr, g, m, co, ens);
  REQUIRE(a.series.size() == b.series.size());
  REQUIRE(a.series.size() >= 3);
  for (std::size_t s = 0; s < a.series.size(); ++s) {
    CHECK(a.series[s].kind == b.series[s].kind);
    REQUIRE(a.series[s].ratios.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(a.series[s].ratios[i] == b.series[s].ratios[i]);
    CHECK(a.series[s].max > 0.0);
    CHECK(a.series[s].max >= a.series[s].median);
  }
}

TEST_CASE("small helpers") {
  CHECK(relative_drift(1.0, 1.1) == doctest::Approx(0.1 / 1.1));
  CHECK(relative_drift(0.0, 0.0) == 0.0);
  CHECK(measure_exponent(2) == doctest::Approx(1.5));
  CHECK(measure_exponent(3) == doctest::Approx(1.25));
  CHECK(stencil_tolerance(4, 8, 256) == doctest::Approx(std::pow(2.0 * M_PI * 8 / 256, 4)));
}

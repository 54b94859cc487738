#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <set>

#include "korn/catalog.hpp"
#include "korn/domain.hpp"
#include "korn/linalg.hpp"
#include "korn/multiplier.hpp"
#include "korn/projection.hpp"
#include "korn/random_field.hpp"
#include "korn/solver.hpp"
#include "korn/spec_io.hpp"
#include "korn/symbol.hpp"

using namespace korn;

namespace {

OperatorSpec random_operator(std::mt19937_64& rng, int n, int dv, int dw, int k) {
  std::normal_distribution<double> g;
  OperatorSpec::Coeffs c;
  for (const MultiIndex& a : multi_indices(n, k)) {
    Eigen::MatrixXd m(dw, dv);
    for (int i = 0; i < dw; ++i)
      for (int j = 0; j < dv; ++j) m(i, j) = g(rng);
    c[a] = m;
  }
  return OperatorSpec(n, dv, dw, k, c);
}

Eigen::VectorXd random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x;
}

Eigen::MatrixXd random_rank(std::mt19937_64& rng, int r, int c, int q) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd b(r, q), d(q, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < q; ++j) b(i, j) = g(rng);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < c; ++j) d(i, j) = g(rng);
  return b * d;
}

double masked_diff(const GridField& a, const GridField& b, const DomainMask& m) {
  double s = 0.0;
  for (std::size_t i : m.indices())
    for (int c = 0; c < a.dim(); ++c) s += std::norm(a.at(i, c) - b.at(i, c));
  return std::sqrt(s);
}

double masked_norm(const GridField& a, const DomainMask& m) {
  double s = 0.0;
  for (std::size_t i : m.indices())
    for (int c = 0; c < a.dim(); ++c) s += std::norm(a.at(i, c));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("symbol algebra on random operators") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> small(1, 3);
  for (int trial = 0; trial < 40; ++trial) {
    int n = small(rng) + 1, dv = small(rng), dm = small(rng), dw = small(rng);
    int k1 = small(rng), k2 = small(rng) - 1;
    OperatorSpec a = random_operator(rng, n, dv, dm, k1);
    OperatorSpec b = random_operator(rng, n, dm, dw, k2 + 1);
    Eigen::VectorXd xi = random_vec(rng, n);
    double scale = a.eval(xi).norm() * b.eval(xi).norm();

    CHECK((adjoint(adjoint(a)).eval(xi) - a.eval(xi)).norm() < 1e-12 * a.eval(xi).norm());
    CHECK((compose(b, a).eval(xi) - b.eval(xi) * a.eval(xi)).norm() < 1e-12 * scale);
    CHECK((add(a, a).eval(xi) - 2.0 * a.eval(xi)).norm() < 1e-12 * a.eval(xi).norm());
    // homogeneity of the principal symbol
    CHECK((a.eval(2.0 * xi) - std::pow(2.0, k1) * a.eval(xi)).norm() < 1e-12 * std::pow(2.0, k1) * a.eval(xi).norm());

    OperatorSpec c = operator_from_json(parse_json_text(operator_to_json(a).dump(), "t"));
    CHECK((c.eval(xi) - a.eval(xi)).norm() < 1e-14 * a.eval(xi).norm());
  }
}

TEST_CASE("pseudo-inverse identities on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    int r = dim(rng), c = dim(rng);
    int q = std::uniform_int_distribution<int>(0, std::min(r, c))(rng);
    Eigen::MatrixXd m = random_rank(rng, r, c, q);
    Eigen::MatrixXd p = pinv(m);
    double s = std::max(1.0, m.norm());
    CHECK(numerical_rank(m) == q);
    CHECK((pinv(p) - m).norm() < 1e-9 * s);
    CHECK((pinv(Eigen::MatrixXd(m.transpose())) - p.transpose()).norm() < 1e-9 * std::max(1.0, p.norm()));
    CHECK((pinv(Eigen::MatrixXd(3.0 * m)) - p / 3.0).norm() < 1e-9 * std::max(1.0, p.norm()));
    // the image projector is symmetric and idempotent
    Eigen::MatrixXd pr = image_projector(m);
    CHECK((pr - pr.transpose()).norm() < 1e-12);
    CHECK((pr * pr - pr).norm() < 1e-11);
  }
}

TEST_CASE("the solver is linear") {
  BoxGrid g(2, 32);
  DomainMask m = make_domain(g, standard_shape("two_ball", 2));
  for (const char* ref : {"cauchy_riemann", "divergence(2)", "laplacian(2)"}) {
    CAPTURE(ref);
    OperatorSpec a = catalog_operator(ref).spec;
    SpectralSolver s(a, g);
    GridField f1 = random_band_limited(g, a.dim_w(), 5, 1);
    GridField f2 = random_band_limited(g, a.dim_w(), 5, 2);
    GridField f = f1;
    f *= 2.0;
    f += f2;
    GridField v = s.solve(f, m).v.sample();
    GridField v1 = s.solve(f1, m).v.sample();
    GridField v2 = s.solve(f2, m).v.sample();
    v1 *= 2.0;
    v1 += v2;
    DomainMask box = make_domain(g, standard_shape("square", 2));
    CHECK(masked_diff(v, v1, box) < 1e-11 * masked_norm(v, box));
  }
}

TEST_CASE("adding a kernel element commutes with T") {
  BoxGrid g(2, 64);
  DomainMask m = make_domain(g, standard_shape("disk", 2));
  OperatorSpec cr = catalog_operator("cauchy_riemann").spec;
  KornProjector t(cr, g);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    // (Re z^j, Im z^j) lies in the kernel of d/dz-bar
    int j = trial + 1;
    Eigen::VectorXd coef = random_vec(rng, 1);
    Polynomial z(2, 2, m.centroid());
    for (int l = 0; l <= j; ++l) {
      double binom = std::tgamma(j + 1) / (std::tgamma(l + 1) * std::tgamma(j - l + 1));
      std::complex<double> il = std::pow(std::complex<double>(0, 1), l);
      Eigen::Vector2d v(il.real(), il.imag());
      z.add_term({j - l, l}, coef(0) * binom * v);
    }
    BoxField u(random_band_limited(g, 2, 5, 20 + trial));
    BoxField uz = u;
    uz.poly = z;
    ProjectionResult a = t.project(u, m);
    ProjectionResult b = t.project(uz, m);
    GridField want = a.t_u;
    GridField zs = BoxField(GridField(g, 2)).sample();
    z.add_to(zs);
    want += zs;
    CHECK(masked_diff(b.t_u, want, m) < 1e-10 * masked_norm(want, m));
  }
}

TEST_CASE("mask interiors are nested") {
  BoxGrid g(2, 64);
  for (const char* fam : {"disk", "square", "two_ball", "blob"}) {
    DomainMask m = make_domain(g, standard_shape(fam, 2));
    std::set<std::size_t> prev(m.indices().begin(), m.indices().end());
    for (int r = 1; r <= 4; ++r) {
      auto in = m.interior(r);
      for (std::size_t i : in) CHECK(prev.count(i) == 1);
      prev = std::set<std::size_t>(in.begin(), in.end());
    }
  }
}

TEST_CASE("band-limited spectra vanish outside the band") {
  for (int n : {1, 2, 3}) {
    BoxGrid g(n, 16);
    int band = 3;
    GridField s = random_band_limited_spectrum(g, 2, band, 11);
    std::vector<int> j(n);
    double outside = 0.0, inside = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      g.unravel(i, j.data());
      bool in = true;
      for (int d = 0; d < n; ++d) in = in && std::min(j[d], 16 - j[d]) <= band;
      for (int c = 0; c < 2; ++c) (in ? inside : outside) += std::abs(s.at(i, c));
    }
    CHECK(outside == 0.0);
    CHECK(inside > 0.0);
    // spectrum of a real field
    const auto& mir = mirror_indices(g);
    for (std::size_t i = 0; i < g.num_points(); ++i)
      for (int c = 0; c < 2; ++c) CHECK(std::abs(s.at(mir[i], c) - std::conj(s.at(i, c))) < 1e-12);
  }
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <default_suite.json>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "korn/bench.hpp"
#include "korn/catalog.hpp"
#include "korn/classify.hpp"
#include "korn/domain.hpp"
#include "korn/linalg.hpp"
#include "korn/norms.hpp"
#include "korn/parallel.hpp"
#include "korn/projection.hpp"
#include "korn/random_field.hpp"
#include "korn/solver.hpp"

using namespace korn;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int g_failed = 0;

void report(int id, const std::string& title, const Outcome& o, double seconds) {
  std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!o.ok) ++g_failed;
}

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  report(id, title, o, std::chrono::duration<double>(Clock::now() - t0).count());
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---- 1: Moore-Penrose identities ----

// largest of the four defects plus the distance of M M+ from an independent projector
double pinv_defect(const Eigen::MatrixXd& m, int rank) {
  Eigen::MatrixXd p = pinv(m);
  double nm = std::max(m.norm(), 1e-300), np = std::max(p.norm(), 1e-300);
  Eigen::MatrixXd mp = m * p, pm = p * m;
  double d = (m * p * m - m).norm() / nm;
  d = std::max(d, (p * m * p - p).norm() / np);
  d = std::max(d, (mp - mp.transpose()).norm() / std::max(mp.norm(), 1.0));
  d = std::max(d, (pm - pm.transpose()).norm() / std::max(pm.norm(), 1.0));
  if (rank >= 0) {
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m.rows(), m.rows());
    if (rank > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), rank);
      proj = q * q.transpose();
    }
    d = std::max(d, (mp - proj).norm() / std::max(proj.norm(), 1.0));
  }
  return d;
}

Outcome criterion_pinv() {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> dim(1, 8);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    int r = dim(rng), c = dim(rng);
    int q = std::uniform_int_distribution<int>(0, std::min(r, c))(rng);
    Eigen::MatrixXd b(r, std::max(q, 1)), e(std::max(q, 1), c);
    for (int i = 0; i < b.size(); ++i) b.data()[i] = gauss(rng);
    for (int i = 0; i < e.size(); ++i) e.data()[i] = gauss(rng);
    Eigen::MatrixXd m = q == 0 ? Eigen::MatrixXd::Zero(r, c) : Eigen::MatrixXd(b.leftCols(q) * e.topRows(q));
    worst = std::max(worst, pinv_defect(m, q));
  }
  double worst_symbol = 0.0;
  SamplingConfig sc;
  sc.quasi_uniform = 64;
  sc.random = 64;
  int symbols = 0;
  for (auto& entry : golden_catalog()) {
    for (auto& xi : sphere_samples(entry.spec.n(), sc)) {
      worst_symbol = std::max(worst_symbol, pinv_defect(entry.spec.eval(xi), -1));
      ++symbols;
    }
  }
  Outcome o;
  o.ok = worst <= 1e-10 && worst_symbol <= 1e-10;
  o.detail = "random worst " + sci(worst) + ", " + std::to_string(symbols) + " symbols worst " + sci(worst_symbol);
  return o;
}

// ---- 2: classification golden table ----

struct Flags {
  int rank = 0;
  std::optional<bool> elliptic;
  bool maximal = false;
};

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Expected flags from the structure of each family.
Flags expected_flags(const std::string& ref) {
  std::string name;
  std::vector<int> p;
  bool adj = ref.rfind("adjoint_of:", 0) == 0;
  parse_ref(adj ? ref.substr(11) : ref, name, p);
  Flags f;
  if (name == "divergence") {
    int n = p[0];
    f.rank = p.size() > 1 ? n : 1;
    f.elliptic = n == 1;
    f.maximal = true;
  } else if (name == "div_k") {
    f = {1, false, true};
  } else if (name == "gradient") {
    f = {1, true, p[0] == 1};
  } else if (name == "grad_k") {
    f = {1, true, false};
  } else if (name == "laplacian" || name == "bilaplacian") {
    f = {1, true, true};
  } else if (name == "cauchy_riemann") {
    f = {2, true, true};
  } else if (name == "sym_gradient") {
    f = {p[0], true, false};
  } else if (name == "deviatoric") {
    f = {p[0], true, p[0] == 2};
  } else if (name == "ext_derivative") {
    f = {binom(p[0] - 1, p[1]), p[1] == 0, p[1] == p[0] - 1};
  } else if (name == "codifferential") {
    f = {binom(p[0] - 1, p[1]), p[1] == p[0] - 1, p[1] == 0};
  } else if (name == "laplace_beltrami") {
    f = {binom(p[0], p[1]), true, true};
  } else {
    throw std::runtime_error("no expectation for " + ref);
  }
  if (adj) {
    // the adjoint symbol is the transpose: surjective exactly where the original is injective
    bool square = f.elliptic.value_or(false) && f.maximal;
    f.maximal = f.elliptic.value_or(false);
    f.elliptic = square ? std::optional<bool>(true) : std::nullopt;
  }
  return f;
}

Outcome criterion_golden() {
  int mismatches = 0, entries = 0;
  std::string first;
  for (auto& e : golden_catalog()) {
    ++entries;
    Flags want = expected_flags(e.name);
    Classification c = classify(e.spec);
    std::vector<std::string> bad;
    if (c.rank_min != want.rank || c.rank_max != want.rank) bad.push_back("rank");
    if (!c.is_constant_rank) bad.push_back("constant_rank");
    if (want.elliptic && c.is_elliptic != *want.elliptic) bad.push_back("elliptic");
    bool system = want.elliptic.value_or(false) && e.spec.dim_v() == e.spec.dim_w();
    if (want.elliptic && c.is_elliptic_system != system) bad.push_back("elliptic_system");
    if (c.is_maximal_rank != want.maximal) bad.push_back("maximal_rank");
    if (c.is_canceling == want.maximal) bad.push_back("canceling");
    // the catalog's own annotations must agree too
    auto own = flag_mismatches(e.expected, c);
    bad.insert(bad.end(), own.begin(), own.end());
    if (!bad.empty()) {
      ++mismatches;
      if (first.empty()) first = e.name + ": " + bad.front();
    }
  }
  Outcome o;
  o.ok = mismatches == 0;
  o.detail = std::to_string(entries) + " entries, " + std::to_string(mismatches) + " mismatches";
  if (!first.empty()) o.detail += ", first " + first;
  return o;
}

// ---- 3: solver exactness ----

Eigen::MatrixXd range_basis(const OperatorSpec& a) {
  Eigen::VectorXd xi = Eigen::VectorXd::LinSpaced(a.n(), 0.7, 1.3);
  xi.normalize();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.eval(xi), Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > 1e-9 * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

GridField onto_range(GridField f, const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd p = basis * basis.transpose();
  Eigen::VectorXd v(f.dim());
  for (std::size_t i = 0; i < f.grid().num_points(); ++i) {
    for (int c = 0; c < f.dim(); ++c) v(c) = f.at(i, c).real();
    v = p * v;
    for (int c = 0; c < f.dim(); ++c) f.at(i, c) = v(c);
  }
  return f;
}

// |A v - f| / |f| on the mask with A v summed term by term from spectral derivatives
double solve_defect(const OperatorSpec& a, const BoxField& v, const GridField& f, const DomainMask& mask) {
  Differentiator d(v, Discretization::spectral());
  GridField av(f.grid(), a.dim_w());
  for (auto& [alpha, coef] : a.coeffs()) {
    GridField dv = d.derivative(alpha);
    for (std::size_t i : mask.indices())
      for (int r = 0; r < a.dim_w(); ++r)
        for (int c = 0; c < a.dim_v(); ++c) av.at(i, r) += coef(r, c) * dv.at(i, c);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i : mask.indices())
    for (int r = 0; r < a.dim_w(); ++r) {
      num += std::norm(av.at(i, r) - f.at(i, r));
      den += std::norm(f.at(i, r));
    }
  return std::sqrt(num / den);
}

Outcome criterion_solver() {
  auto t0 = Clock::now();
  double worst = 0.0;
  int solves = 0;
  std::string worst_case;
  auto one = [&](const CatalogEntry& e, int size, const std::string& family, int band) {
    BoxGrid g(e.spec.n(), size);
    DomainMask mask = make_domain(g, standard_shape(family, e.spec.n()));
    GridField f = random_band_limited(g, e.spec.dim_w(), band, sample_seed(7, solves));
    f = onto_range(std::move(f), range_basis(e.spec));
    SolveResult s = solve(e.spec, f, mask);
    double d = solve_defect(e.spec, s.v, f, mask);
    ++solves;
    if (!(d <= worst)) {
      worst = d;
      worst_case = e.name + "/" + family + "/" + std::to_string(size);
    }
  };
  for (auto& e : maximal_rank_catalog(2))
    for (int size : {64, 128})
      for (const char* fam : {"disk", "square", "two_ball"}) one(e, size, fam, 8);
  for (auto& e : maximal_rank_catalog(3))
    if (e.name == "laplace_beltrami(3,1)")
      for (const char* fam : {"disk", "square", "two_ball"}) one(e, 32, fam, 3);
  double secs = seconds_since(t0);
  Outcome o;
  o.ok = worst <= 1e-8 && secs < 120.0;
  o.detail = std::to_string(solves) + " solves, worst " + sci(worst) + " at " + worst_case;
  return o;
}

// ---- 4: projection contracts ----

Polynomial harmonic_cubic(const Eigen::VectorXd& c) {
  Polynomial p(2, 1, c);
  Eigen::VectorXd one(1);
  one << 1.0;
  p.add_term({3, 0}, one);  // x^3 - 3 x y^2 + x^2 - y^2
  one << -3.0;
  p.add_term({1, 2}, one);
  one << 1.0;
  p.add_term({2, 0}, one);
  one << -1.0;
  p.add_term({0, 2}, one);
  return p;
}

Polynomial holomorphic_cubic(const Eigen::VectorXd& c) {
  // z^3 = (x^3 - 3 x y^2) + i (3 x^2 y - y^3)
  Polynomial p(2, 2, c);
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  p.add_term({3, 0}, v);
  v << -3.0, 0.0;
  p.add_term({1, 2}, v);
  v << 0.0, 3.0;
  p.add_term({2, 1}, v);
  v << 0.0, -1.0;
  p.add_term({0, 3}, v);
  return p;
}

double masked_norm(const GridField& f, const DomainMask& m) {
  double s = 0.0;
  for (std::size_t i : m.indices())
    for (int c = 0; c < f.dim(); ++c) s += std::norm(f.at(i, c));
  return std::sqrt(s);
}

// w relative to u for an A-free input
double calibration(const OperatorSpec& a, const BoxField& u, const DomainMask& mask) {
  KornProjector proj(a, mask.grid());
  ProjectionResult r = proj.project(u, mask);
  return masked_norm(r.w.sample(), mask) / masked_norm(u.sample(), mask);
}

Outcome criterion_projection() {
  BoxGrid g(2, 128);
  DomainMask disk = make_domain(g, standard_shape("disk", 2));
  Eigen::VectorXd c = disk.centroid();

  double cal = 0.0;
  {
    BoxField u(GridField(g, 1));
    u.poly = harmonic_cubic(c);
    cal = std::max(cal, calibration(catalog_operator("laplacian(2)").spec, u, disk));
  }
  {
    BoxField u(GridField(g, 2));
    u.poly = holomorphic_cubic(c);
    cal = std::max(cal, calibration(catalog_operator("cauchy_riemann").spec, u, disk));
  }
  {
    // u = (d psi / dy, -d psi / dx) for a band-limited stream function
    BoxField psi(random_band_limited(g, 1, 8, 99));
    Differentiator d(psi, Discretization::spectral());
    GridField dx = d.derivative({1, 0}), dy = d.derivative({0, 1});
    GridField u(g, 2);
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      u.at(i, 0) = dy.at(i, 0);
      u.at(i, 1) = -dx.at(i, 0);
    }
    cal = std::max(cal, calibration(catalog_operator("divergence(2)").spec, BoxField(u), disk));
  }

  Json scenarios = Json::array();
  for (const char* op : {"laplacian(2)", "cauchy_riemann", "divergence(2)", "divergence(2,2)", "bilaplacian(2)",
                         "laplace_beltrami(2,1)", "div_k(2,3)"})
    for (const char* fam : {"disk", "square", "two_ball", "blob"})
      scenarios.push_back({{"name", std::string(op) + "/" + fam},
                           {"operator", std::string("catalog:") + op},
                           {"domain", fam},
                           {"grids", {128, 256}},
                           {"ensemble", {{"seed", 1}, {"samples", 1}, {"band", 6}}},
                           {"checks", {"idempotence", "helmholtz", "kernel_residual"}}});
  BenchConfig cfg = parse_bench_config(Json{{"scenarios", scenarios}});
  BenchReport rep = run_bench(cfg);
  double worst_idem = 0.0, worst_helm = 0.0, lo_decay = 1e300, hi_decay = 0.0;
  int judged = 0;
  std::string first;
  for (auto& r : rep.rows) {
    if (r.status == "info") continue;
    ++judged;
    if (r.status != "pass" && first.empty()) first = r.scenario + " " + r.check + " " + r.status;
    if (r.check == "idempotence") worst_idem = std::max(worst_idem, r.value / r.threshold);
    if (r.check == "helmholtz") worst_helm = std::max(worst_helm, r.value);
    if (r.check == "kernel_residual") {
      lo_decay = std::min(lo_decay, r.drift);
      hi_decay = std::max(hi_decay, r.drift);
    }
  }
  Outcome o;
  o.ok = cal <= 1e-10 && rep.failures == 0;
  o.detail = "calibration " + sci(cal) + ", idempotence/tolerance " + sci(worst_idem) + ", decomposition " +
             sci(worst_helm) + ", decay ratios [" + sci(lo_decay) + ", " + sci(hi_decay) + "], " +
             std::to_string(rep.failures) + "/" + std::to_string(judged) + " rows failed";
  if (!first.empty()) o.detail += ", first " + first;
  return o;
}

// ---- 5 and 8: default suite ----

std::string g_suite_csv;

Outcome criterion_constants(const std::string& suite) {
  auto t0 = Clock::now();
  BenchConfig cfg = load_bench_config(suite);
  BenchReport rep = run_bench(cfg);
  g_suite_csv = bench_csv(rep);
  double secs = seconds_since(t0);
  int judged = 0;
  double worst_drift = 0.0, worst_rm = 0.0;
  std::vector<std::string> failed;
  for (auto& r : rep.rows) {
    if (r.status == "info") continue;
    ++judged;
    if (std::isfinite(r.drift)) worst_drift = std::max(worst_drift, r.drift);
    if (std::isfinite(r.value)) worst_rm = std::max(worst_rm, r.value);
    if (r.status != "pass") {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s grid=%d p=%g r=%d %s drift=%.3f running_max=%.3f", r.scenario.c_str(),
                    r.grid, r.p, r.r, r.check.c_str(), r.drift, r.value);
      failed.push_back(buf);
    }
  }
  for (auto& f : failed) std::printf("  failed row: %s\n", f.c_str());
  Outcome o;
  o.ok = rep.failures == 0 && secs < 900.0;
  o.detail = std::to_string(cfg.scenarios.size()) + " scenarios, " + std::to_string(judged) + " judged rows, " +
             std::to_string(rep.failures) + " failed, worst drift " + sci(worst_drift) + ", worst running max " +
             sci(worst_rm);
  if (secs >= 900.0) o.detail += ", over the 15 min budget";
  return o;
}

Outcome criterion_determinism(const std::string& suite) {
  if (g_suite_csv.empty()) return {false, "first suite run produced nothing"};
  BenchConfig cfg = load_bench_config(suite);
  BenchOptions opt;
  opt.threads = thread_count() == 1 ? 2 : 1;
  std::string again = bench_csv(run_bench(cfg, opt));
  Outcome o;
  o.ok = again == g_suite_csv;
  o.detail = std::to_string(g_suite_csv.size()) + " CSV bytes, rerun with " + std::to_string(opt.threads) +
             " thread(s) vs " + std::to_string(thread_count()) + (o.ok ? ", identical" : ", differs");
  return o;
}

// ---- 6: weak Korn ----

// independent check of the Delta_W multiplier against (2 pi |m| / L)^{2 k kQ}
double closed_form_defect(const AnnihilatorPair& pair, const BoxGrid& g) {
  OperatorSpec dw = delta_w(pair);
  MultiplierTable t = operator_multiplier(dw, g, Discretization::spectral());
  const int q = dw.order();
  const int dim = dw.dim_v();
  std::vector<int> j(g.n());
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.num_points(); ++idx) {
    g.unravel(idx, j.data());
    double m2 = 0.0;
    bool nyquist = false;
    for (int a = 0; a < g.n(); ++a) {
      nyquist = nyquist || j[a] == g.size() / 2;
      int f = g.frequency(j[a]);
      m2 += double(f) * f;
    }
    if (nyquist || m2 == 0.0) continue;
    double scale = std::pow(2.0 * std::numbers::pi * std::sqrt(m2) / g.length(), q);
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(dim, dim) * scale;
    // the differential operator carries i^q = (-1)^{q/2}; its symbol is the positive form
    Eigen::MatrixXcd got = t.value(idx) * std::pow(-1.0, q / 2);
    worst = std::max(worst, (got - want).norm() / scale);
  }
  return worst;
}

Outcome criterion_weak() {
  double closed = 0.0;
  for (const char* ref : {"grad_curl(2)", "grad_curl(3)", "d_d(3,0)"}) {
    AnnihilatorPair pair = catalog_annihilator(ref);
    closed = std::max(closed, closed_form_defect(pair, BoxGrid(pair.a.n(), pair.a.n() == 2 ? 64 : 32)));
  }
  Json scenarios = Json::array();
  auto add = [&](const char* name, const char* op, const char* pair, std::vector<int> grids, int band) {
    scenarios.push_back({{"name", name},
                         {"operator", op},
                         {"annihilator", pair},
                         {"domain", "disk"},
                         {"grids", grids},
                         {"ensemble", {{"seed", 1}, {"samples", 64}, {"band", band}}},
                         {"checks", {"weak_korn"}}});
  };
  add("grad_curl(2)", "catalog:gradient(2)", "grad_curl(2)", {64, 128, 256}, 8);
  add("grad_curl(3)", "catalog:gradient(3)", "grad_curl(3)", {64, 128}, 3);
  add("d_d(3,0)", "catalog:gradient(3)", "d_d(3,0)", {64, 128}, 3);
  BenchReport rep = run_bench(parse_bench_config(Json{{"scenarios", scenarios}}));
  std::string detail = "closed form " + sci(closed);
  std::string first;
  for (auto& r : rep.rows) {
    if (r.status == "info") continue;
    if (r.check == "weak_korn:residual") detail += ", " + r.scenario + " decay " + sci(r.drift);
    if (r.check == "weak_korn:ratio") detail += ", " + r.scenario + " ratio drift " + sci(r.drift);
    if (r.status != "pass" && first.empty()) first = r.scenario + " " + r.check + " " + r.status;
  }
  Outcome o;
  o.ok = closed <= 1e-10 && rep.failures == 0;
  o.detail = detail;
  if (!first.empty()) o.detail += ", first failure " + first;
  return o;
}

// ---- 7: least-squares oracle for the Cauchy-Riemann projection ----

// W^{1,2}(mask) distance from zbar = (x, -y) to holomorphic polynomials of degree <= 12,
// by least squares on the mask cells with exact derivatives of the basis.
double holomorphic_distance(const DomainMask& m) {
  const BoxGrid& g = m.grid();
  const double h = g.spacing();
  const std::complex<double> c0(m.centroid()(0), m.centroid()(1));
  const double radius = 0.2;  // keeps the basis well scaled
  const int degree = 12;
  const int cols = 2 * (degree + 1);
  const std::size_t cells = m.count();
  Eigen::MatrixXd basis(6 * cells, cols);
  Eigen::VectorXd target(6 * cells);
  int j[2];
  std::size_t row = 0;
  for (std::size_t i : m.indices()) {
    g.unravel(i, j);
    std::complex<double> z(j[0] * h, j[1] * h), s = (z - c0) / radius;
    // rows: u, v, u_x, v_x, u_y, v_y, each weighted by the cell area
    target.segment(row, 6) << h * z.real(), -h * z.imag(), h, 0.0, 0.0, -h;
    for (int d = 0; d <= degree; ++d)
      for (int part = 0; part < 2; ++part) {
        std::complex<double> a = part ? std::complex<double>(0, 1) : 1.0;
        std::complex<double> f = a * std::pow(s, d);
        std::complex<double> df = d ? a * double(d) * std::pow(s, d - 1) / radius : 0.0;
        // f' = u_x + i v_x, and u_y = -v_x, v_y = u_x
        basis.block(row, 2 * d + part, 6, 1) << h * f.real(), h * f.imag(), h * df.real(), h * df.imag(),
            -h * df.imag(), h * df.real();
      }
    row += 6;
  }
  Eigen::VectorXd x = basis.colPivHouseholderQr().solve(target);
  return (basis * x - target).norm();
}

Outcome criterion_oracle() {
  const OperatorSpec cr = catalog_operator("cauchy_riemann").spec;
  Outcome o;
  o.detail.clear();
  for (int size : {128, 256}) {
    BoxGrid g(2, size);
    DomainMask disk = make_domain(g, standard_shape("disk", 2));
    GridField u(g, 2), au(g, 2);
    // A zbar from the coefficients: only first derivatives, d_x zbar = (1, 0), d_y zbar = (0, -1)
    Eigen::Vector2d dx(1.0, 0.0), dy(0.0, -1.0);
    Eigen::VectorXd a_zbar = Eigen::VectorXd::Zero(cr.dim_w());
    for (auto& [alpha, coef] : cr.coeffs()) a_zbar += coef * (alpha[0] == 1 ? dx : dy);
    int j[2];
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      g.unravel(i, j);
      u.at(i, 0) = j[0] * g.spacing();
      u.at(i, 1) = -j[1] * g.spacing();
      for (int r = 0; r < cr.dim_w(); ++r) au.at(i, r) = a_zbar(r);
    }
    ProjectionResult r = korn_project(cr, u, au, disk);
    double ours = sobolev_norm(r.w, disk, 1, 2.0, Discretization::central(4)).value;
    double oracle = holomorphic_distance(disk);
    double rel = std::abs(ours - oracle) / oracle;
    o.ok = o.ok && rel <= 0.05;
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += std::to_string(size) + ": " + sci(ours) + " vs " + sci(oracle) + " (" + sci(100 * rel) + "%)";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <default_suite.json>\n");
    return 2;
  }
  const std::string suite = argv[1];
  std::printf("threads: %d\n", thread_count());

  {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criterion_pinv();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    double s = seconds_since(t0);
    if (s >= 10.0) o = {false, o.detail + ", over the 10 s budget"};
    report(1, "pseudo-inverse identities", o, s);
  }
  {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criterion_golden();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    double s = seconds_since(t0);
    if (s >= 30.0) o = {false, o.detail + ", over the 30 s budget"};
    report(2, "classification golden table", o, s);
  }
  run(3, "solver exactness off the zero frequency", criterion_solver);
  run(4, "projection contracts", criterion_projection);
  run(5, "empirical constants bounded", [&] { return criterion_constants(suite); });
  run(6, "weak Korn projection", criterion_weak);
  run(7, "Cauchy-Riemann least-squares oracle", criterion_oracle);
  run(8, "bench determinism", [&] { return criterion_determinism(suite); });

  std::printf("%d of 8 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}

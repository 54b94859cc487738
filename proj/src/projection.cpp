#include "korn/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "korn/error.hpp"
#include "korn/parallel.hpp"
#include "korn/random_field.hpp"

namespace korn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SolveOptions solve_options(const ProjectionOptions& opt) {
  SolveOptions s;
  s.disc = opt.disc;
  s.rank_tol = opt.rank_tol;
  s.compensate_corners = opt.compensate_corners;
  return s;
}

GridField masked(const GridField& f, const DomainMask& mask) {
  GridField out(f.grid(), f.dim(), f.is_real());
  for (std::size_t i : mask.indices())
    for (int c = 0; c < f.dim(); ++c) out.at(i, c) = f.at(i, c);
  return out;
}

double rel_l2_mismatch(const GridField& a, const GridField& b, const DomainMask& mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i : mask.indices())
    for (int c = 0; c < a.dim(); ++c) {
      num += std::norm(a.at(i, c) - b.at(i, c));
      den += std::norm(b.at(i, c));
    }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

NormReport kernel_residual_or_nan(const OperatorSpec& a, const GridField& t, const DomainMask& mask, int order,
                                  int margin, std::vector<std::string>& warnings) {
  try {
    return interior_residual(a, t, mask, order, margin);
  } catch (const PreconditionError& e) {
    warnings.push_back(e.what());
    NormReport r;
    r.name = "interior_residual";
    r.value = kNaN;
    return r;
  }
}

void add_norms(ProjectionResult& r, const OperatorSpec& a, const GridField& u, const DomainMask& mask,
               const ProjectionOptions& opt) {
  if (!opt.compute_norms) return;
  auto wk = sobolev_norms(r.w, mask, a.order(), opt.ps, opt.disc);
  for (std::size_t q = 0; q < opt.ps.size(); ++q) {
    double p = opt.ps[q];
    NormReport nu = lp_norm(u, mask, p), nt = lp_norm(r.t_u, mask, p), na = lp_norm(r.au, mask, p);
    nu.name = "u_" + nu.name;
    nt.name = "t_u_" + nt.name;
    na.name = "au_" + na.name;
    NormReport nw = wk[q];
    nw.name = "w_" + nw.name;
    r.norms.insert(r.norms.end(), {nu, nt, na, nw});
    double den = na.value;
    r.constants.push_back({"solved_part", p, den > 0 ? nw.value / den : kNaN});
    r.constants.push_back({"excess", p, den > 0 ? (nt.value - nu.value) / den : kNaN});
  }
}

int stencil_order_of(const Discretization& d) { return d.stencil_order > 0 ? d.stencil_order : 4; }

}  // namespace

double delta_w_closed_form_error(const AnnihilatorPair& pair, const BoxGrid& grid) {
  OperatorSpec dw = delta_w(pair);
  const int kk = pair.a.order() * pair.q.order();
  MultiplierTable t = operator_multiplier(dw, grid, Discretization::spectral());
  const double sign = (kk % 2) ? -1.0 : 1.0;
  const int n = grid.n();
  std::vector<int> j(n);
  double worst = 0.0;
  for (std::size_t i = 1; i < grid.num_points(); ++i) {
    grid.unravel(i, j.data());
    double m2 = 0.0;
    bool nyquist = false;
    for (int d = 0; d < n; ++d) {
      nyquist = nyquist || j[d] == grid.size() / 2;
      double kv = 2.0 * std::numbers::pi * grid.frequency(j[d]) / grid.length();
      m2 += kv * kv;
    }
    if (nyquist) continue;
    double c = std::pow(m2, kk);
    Eigen::MatrixXcd v = sign * t.value(i);
    Eigen::MatrixXcd e = v - c * Eigen::MatrixXcd::Identity(v.rows(), v.cols());
    worst = std::max(worst, e.cwiseAbs().maxCoeff() / c);
  }
  return worst;
}

double stencil_tolerance(int stencil_order, int band, int size) {
  return std::pow(2.0 * std::numbers::pi * band / size, stencil_order);
}

// ---- Korn projection ----

KornProjector::KornProjector(const OperatorSpec& a, const BoxGrid& grid, const ProjectionOptions& opt)
    : solver_(a, grid, solve_options(opt)),
      opt_(opt),
      a_spectral_(operator_multiplier(solver_.spec(), grid, Discretization::spectral())) {}

ProjectionResult KornProjector::finish(const GridField& u, const GridField& au, const DomainMask& mask,
                                       const GridField* u_box) const {
  const OperatorSpec& a = solver_.spec();
  if (u.dim() != a.dim_v()) throw DimensionError("korn_project: u has wrong component count");
  if (au.dim() != a.dim_w()) throw DimensionError("korn_project: au has wrong component count");
  if (!(u.grid() == solver_.grid()) || !(au.grid() == solver_.grid()))
    throw DimensionError("korn_project: grid differs from the projector's");
  ProjectionResult r;
  SolveResult s = solver_.solve(au, mask, false);
  r.w = std::move(s.v);
  r.warnings = std::move(s.warnings);
  r.au = au;
  GridField ws = r.w.sample();
  r.t_u = GridField(u.grid(), u.dim(), u.is_real() && ws.is_real());
  for (std::size_t i : mask.indices())
    for (int c = 0; c < u.dim(); ++c) r.t_u.at(i, c) = u.at(i, c) - ws.at(i, c);
  if (u_box) {
    r.u_box = *u_box;
    r.t_box = *u_box;
    r.t_box -= ws;
  }
  r.kernel_residual = kernel_residual_or_nan(a, r.t_u, mask, stencil_order_of(opt_.disc), opt_.residual_margin, r.warnings);
  add_norms(r, a, u, mask, opt_);
  return r;
}

ProjectionResult KornProjector::project(const GridField& u, const GridField& au, const DomainMask& mask) const {
  return finish(u, au, mask, nullptr);
}

ProjectionResult KornProjector::project(const BoxField& u, const DomainMask& mask) const {
  GridField us = u.sample();
  GridField au = apply_operator(solver_.spec(), a_spectral_, u);
  if (us.is_real()) au.make_real();
  return finish(us, au, mask, &us);
}

ProjectionResult KornProjector::project(const BoxField& u, const GridField& au, const DomainMask& mask,
                                        double consistency_tol) const {
  GridField ref = apply_operator(solver_.spec(), a_spectral_, u);
  double mis = rel_l2_mismatch(au, ref, mask);
  if (!(mis <= consistency_tol))
    throw PreconditionError("korn_project: au is not A u on the mask (relative mismatch " + std::to_string(mis) + ")");
  GridField us = u.sample();
  return finish(us, au, mask, &us);
}

ProjectionResult KornProjector::project_spectrum(const GridField& spec, const DomainMask& mask) const {
  GridField us = from_spectrum(spec, true);
  GridField au = from_spectrum(apply_multiplier_spectrum(spec, a_spectral_), true);
  return finish(us, au, mask, &us);
}

ProjectionResult korn_project(const OperatorSpec& a, const GridField& u, const GridField& au, const DomainMask& mask,
                              const ProjectionOptions& opt) {
  return KornProjector(a, mask.grid(), opt).project(u, au, mask);
}

HelmholtzParts helmholtz_decompose(const OperatorSpec& a, const GridField& u, const GridField& au,
                                   const DomainMask& mask, const ProjectionOptions& opt) {
  ProjectionOptions o = opt;
  o.compute_norms = false;
  ProjectionResult r = korn_project(a, u, au, mask, o);
  return {std::move(r.t_u), std::move(r.w)};
}

// ---- weak Korn projection ----

WeakKornProjector::WeakKornProjector(const AnnihilatorPair& pair, const BoxGrid& grid, const ProjectionOptions& opt)
    : pair_(pair), opt_(opt), solver_([&] {
        AnnihilatorReport rep = verify_annihilator(pair);
        if (!rep.ok) throw PreconditionError("weak_korn_project: pair '" + pair.name + "' rejected: " + rep.message);
        return SpectralSolver(delta_w(pair), grid, solve_options(opt));
      }()) {
  const OperatorSpec& a = pair_.a;
  const int kq = pair_.q.order();
  OperatorSpec astar = adjoint(a);
  back_ = kq == 1 ? astar : compose(astar, power(compose(a, astar), kq - 1));
  laplacian_a_ = generalized_laplacian(a);
  a_spectral_ = operator_multiplier(a, grid, Discretization::spectral());
  back_table_ = operator_multiplier(back_, grid, opt_.disc);
  // delta_w carries the symbol of Delta_W, which as an operator is (-1)^{k kQ} Delta_W
  sign_ = (a.order() * kq) % 2 == 0 ? 1 : -1;
}

ProjectionResult WeakKornProjector::project(const BoxField& u, const DomainMask& mask) const {
  if (u.dim() != pair_.a.dim_v()) throw DimensionError("weak_korn_project: u has wrong component count");
  if (!(u.grid() == solver_.grid())) throw DimensionError("weak_korn_project: grid differs from the projector's");
  GridField us = u.sample();
  GridField au = apply_operator(pair_.a, a_spectral_, u);
  if (us.is_real()) au.make_real();
  return finish(us, std::move(au), mask);
}

ProjectionResult WeakKornProjector::project_spectrum(const GridField& spec, const DomainMask& mask) const {
  if (spec.dim() != pair_.a.dim_v()) throw DimensionError("weak_korn_project: u has wrong component count");
  if (!(spec.grid() == solver_.grid())) throw DimensionError("weak_korn_project: grid differs from the projector's");
  GridField us = from_spectrum(spec, true);
  GridField au = from_spectrum(apply_multiplier_spectrum(spec, a_spectral_), true);
  return finish(us, std::move(au), mask);
}

ProjectionResult WeakKornProjector::finish(const GridField& us, GridField au, const DomainMask& mask) const {
  const OperatorSpec& a = pair_.a;
  ProjectionResult r;
  r.au = std::move(au);
  GridField rhs = masked(r.au, mask);
  if (sign_ < 0) rhs *= -1.0;
  SolveResult s = solver_.solve(rhs, mask, false);
  r.warnings = std::move(s.warnings);

  r.w = BoxField(apply_multiplier(s.v.periodic, back_table_, s.v.periodic.is_real()));
  if (!s.v.poly.empty()) r.w.poly = s.v.poly.apply(back_);
  if (!s.v.poly_imag.empty()) r.w.poly_imag = s.v.poly_imag.apply(back_);

  GridField ws = r.w.sample();
  r.u_box = us;
  r.t_box = us;
  r.t_box -= ws;
  r.t_u = masked(r.t_box, mask);
  r.kernel_residual = kernel_residual_or_nan(laplacian_a_, r.t_box, mask, stencil_order_of(opt_.disc), opt_.residual_margin, r.warnings);
  add_norms(r, a, us, mask, opt_);
  return r;
}

ProjectionResult weak_korn_project(const AnnihilatorPair& pair, const BoxField& u, const DomainMask& mask,
                                   const ProjectionOptions& opt) {
  return WeakKornProjector(pair, mask.grid(), opt).project(u, mask);
}

// ---- empirical constants ----

double measure_exponent(int n) {
  if (n < 2) return 1.5;
  return 0.5 * (1.0 + static_cast<double>(n) / (n - 1));
}

double relative_drift(double coarse, double fine) {
  double s = std::max(std::abs(coarse), std::abs(fine));
  return s > 0 ? std::abs(fine - coarse) / s : 0.0;
}

namespace {

struct SampleOut {
  std::vector<double> ratios;  // one per series
  double kernel_rel = 0.0;
  std::vector<std::string> warnings;
};

void summarize(RatioSeries& s) {
  std::vector<double> ok;
  double half_max = 0.0;
  const std::size_t half = s.ratios.size() / 2;
  for (std::size_t i = 0; i < s.ratios.size(); ++i) {
    double v = s.ratios[i];
    if (std::isnan(v)) {
      ++s.kernel_hits;
      continue;
    }
    ok.push_back(v);
    if (i < half) half_max = std::max(half_max, v);
  }
  if (ok.empty()) {
    s.max = s.median = kNaN;
    return;
  }
  s.max = *std::max_element(ok.begin(), ok.end());
  std::sort(ok.begin(), ok.end());
  std::size_t m = ok.size() / 2;
  s.median = ok.size() % 2 ? ok[m] : 0.5 * (ok[m - 1] + ok[m]);
  s.running_max_change = s.max > 0 ? (s.max - half_max) / s.max : 0.0;
}

template <class Project>
ConstantReport run_ensemble(const OperatorSpec& a, const BoxGrid& grid, const DomainMask& mask,
                            const ConstantOptions& opt, const EnsembleConfig& ens, const Project& project) {
  if (ens.samples < 1) throw ConfigError("empirical_constant: empty ensemble");
  const int k = a.order();
  const int n = grid.n();
  std::vector<double> ps = opt.projection.ps;
  if (ps.empty()) throw ConfigError("empirical_constant: no exponents");
  for (double p : ps)
    if (!(p > 1.0) || std::isinf(p)) throw ConfigError("empirical_constant: exponents must lie in (1, inf)");

  // numerator exponents: ps, then 2 for the negative norm, then q for measure data
  std::vector<double> num_ps = ps;
  auto index_of = [&](double p) {
    for (std::size_t i = 0; i < num_ps.size(); ++i)
      if (num_ps[i] == p) return i;
    num_ps.push_back(p);
    return num_ps.size() - 1;
  };
  const std::size_t i2 = opt.negative ? index_of(2.0) : 0;
  std::vector<int> rs = opt.negative_orders;
  if (rs.empty()) rs.push_back(k);
  for (int r : rs)
    if (r < 1 || r > k) throw ConfigError("empirical_constant: negative order must lie in [1, k]");
  const double q = measure_exponent(n);
  const bool measure = opt.measure_data && k >= 1;
  const std::size_t iq = measure ? index_of(q) : 0;

  ConstantReport rep;
  rep.size = grid.size();
  auto add_series = [&](const char* kind, double p, int r, bool gated) {
    RatioSeries s;
    s.kind = kind;
    s.p = p;
    s.r = r;
    s.gated = gated;
    rep.series.push_back(s);
  };
  for (double p : ps) add_series("lp", p, 0, true);
  if (opt.negative)
    for (int r : rs) {
      add_series("negative", 2.0, r, true);
      add_series("negative_box", 2.0, r, false);
    }
  if (measure) add_series("measure", q, 1, true);

  std::vector<SampleOut> out(ens.samples);
  parallel_for(
      static_cast<std::size_t>(ens.samples),
      [&](std::size_t s) {
        SampleOut& o = out[s];
        GridField spec = random_band_limited_spectrum(grid, a.dim_v(), ens.band, sample_seed(ens.seed, s));
        ProjectionResult r = project(spec);
        o.warnings = r.warnings;
        double u2 = lp_norm(r.u_box, mask, 2.0).value;
        double au2 = lp_norm(r.au, mask, 2.0).value;
        o.kernel_rel = au2 > 0 ? r.kernel_residual.value / au2 : 0.0;
        bool hit = !(au2 > opt.kernel_hit_tol * u2);
        if (hit) {
          o.ratios.assign(rep.series.size(), kNaN);
          return;
        }
        auto ladder = sobolev_ladder(r.w, mask, k, num_ps, opt.projection.disc);
        for (std::size_t j = 0; j < ps.size(); ++j)
          o.ratios.push_back(ladder[k][j] / lp_norm(r.au, mask, ps[j]).value);
        if (opt.negative) {
          GridField au_mask = masked(r.au, mask);
          for (int ro : rs) {
            double num = ladder[k - ro][i2];
            double den = neg_sobolev_norm_2(au_mask, ro).value;
            o.ratios.push_back(den > 0 ? num / den : kNaN);
            double den_box = neg_sobolev_norm_2(r.au, ro).value;
            o.ratios.push_back(den_box > 0 ? num / den_box : kNaN);
          }
        }
        if (measure) o.ratios.push_back(ladder[k - 1][iq] / lp_norm(r.au, mask, 1.0).value);
      },
      opt.threads);

  for (std::size_t s = 0; s < out.size(); ++s) {
    for (std::size_t j = 0; j < rep.series.size(); ++j) rep.series[j].ratios.push_back(out[s].ratios[j]);
    if (std::isnan(out[s].kernel_rel) || out[s].kernel_rel > rep.kernel_residual_max)
      rep.kernel_residual_max = out[s].kernel_rel;
    for (auto& w : out[s].warnings)
      if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end()) rep.warnings.push_back(w);
  }
  for (auto& s : rep.series) summarize(s);
  return rep;
}

}  // namespace

ConstantReport empirical_constant(const OperatorSpec& a, const BoxGrid& grid, const DomainMask& mask,
                                  const ConstantOptions& opt, const EnsembleConfig& ens) {
  ProjectionOptions po = opt.projection;
  po.compute_norms = false;
  KornProjector proj(a, grid, po);
  return run_ensemble(a, grid, mask, opt, ens, [&](const GridField& spec) { return proj.project_spectrum(spec, mask); });
}

ConstantReport empirical_constant(const AnnihilatorPair& pair, const BoxGrid& grid, const DomainMask& mask,
                                  const ConstantOptions& opt, const EnsembleConfig& ens) {
  ProjectionOptions po = opt.projection;
  po.compute_norms = false;
  WeakKornProjector proj(pair, grid, po);
  return run_ensemble(pair.a, grid, mask, opt, ens, [&](const GridField& spec) { return proj.project_spectrum(spec, mask); });
}

}  // namespace korn

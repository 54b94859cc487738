#include "korn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "korn/catalog.hpp"
#include "korn/error.hpp"
#include "korn/field_io.hpp"
#include "korn/random_field.hpp"

namespace korn {
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kStencilOrder = 4;
const char* kNotMaximal = "precondition-failed: not maximal rank";

std::string resolve_path(const std::string& base, const std::string& p) {
  if (base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).string();
}

[[noreturn]] void bad(const std::string& where, const std::string& msg) { throw ConfigError(where + ": " + msg); }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad(where, "unknown field '" + it.key() + "'");
}

template <class T>
T get_as(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(where, "field '" + key + "' is missing or has the wrong type");
  }
}

template <class T>
T get_or(const Json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get_as<T>(j, key, where);
}

bool wants(const BenchScenario& s, const std::string& check) {
  return std::find(s.checks.begin(), s.checks.end(), check) != s.checks.end();
}

BenchScenario parse_scenario(const Json& j, std::size_t index, const std::string& base) {
  std::string where = "scenario " + std::to_string(index);
  if (!j.is_object()) bad(where, "must be an object");
  if (j.contains("name") && j.at("name").is_string()) where = "scenario '" + j.at("name").get<std::string>() + "'";
  check_keys(j, {"name", "operator", "annihilator", "domain", "grids", "pad", "length", "p", "r", "ensemble", "checks"},
             where);
  BenchScenario s;
  s.name = get_or<std::string>(j, "name", "scenario" + std::to_string(index), where);
  where = "scenario '" + s.name + "'";
  s.operator_ref = get_as<std::string>(j, "operator", where);
  s.annihilator = get_or<std::string>(j, "annihilator", "", where);
  if (!j.contains("domain")) bad(where, "field 'domain' is missing");
  s.domain = j.at("domain");
  s.grids = get_as<std::vector<int>>(j, "grids", where);
  s.pad = get_or<int>(j, "pad", 2, where);
  s.length = get_or<double>(j, "length", 1.0, where);
  s.ps = get_or<std::vector<double>>(j, "p", {2.0}, where);
  s.rs = get_or<std::vector<int>>(j, "r", {0}, where);
  s.checks = get_or<std::vector<std::string>>(j, "checks", {"constant_drift"}, where);
  if (j.contains("ensemble")) {
    const Json& e = j.at("ensemble");
    if (!e.is_object()) bad(where, "'ensemble' must be an object");
    check_keys(e, {"seed", "samples", "band"}, where + " ensemble");
    s.ensemble.seed = get_or<std::uint64_t>(e, "seed", s.ensemble.seed, where);
    s.ensemble.samples = get_or<int>(e, "samples", s.ensemble.samples, where);
    s.ensemble.band = get_or<int>(e, "band", s.ensemble.band, where);
  }

  if (s.grids.empty()) bad(where, "grid ladder is empty");
  for (std::size_t i = 1; i < s.grids.size(); ++i)
    if (s.grids[i] <= s.grids[i - 1]) bad(where, "grid sizes must be strictly increasing");
  for (int n : s.grids)
    if (n < 2 || (n & (n - 1)) != 0) bad(where, "grid size " + std::to_string(n) + " is not a power of two");
  if (s.ps.empty()) bad(where, "p list is empty");
  for (double p : s.ps)
    if (!(p > 1.0) || !std::isfinite(p)) bad(where, "p values must lie in (1, inf)");
  if (s.ensemble.samples < 1) bad(where, "ensemble needs at least one sample");
  for (auto& c : s.checks)
    if (std::find(bench_check_names().begin(), bench_check_names().end(), c) == bench_check_names().end())
      bad(where, "unknown check '" + c + "'");

  std::string ref = s.operator_ref;
  if (ref.rfind("catalog:", 0) != 0) ref = resolve_path(base, ref);
  try {
    s.op = resolve_operator(ref);
  } catch (const ConfigError& e) {
    bad(where, e.what());
  } catch (const Error& e) {
    bad(where, std::string("operator: ") + e.what());
  }
  const int k = s.op.order();
  bool has_two = std::find(s.ps.begin(), s.ps.end(), 2.0) != s.ps.end();
  for (int r : s.rs) {
    if (r < 0 || r > k) bad(where, "r values must lie in [0, k] with k = " + std::to_string(k));
    if (r > 0 && !has_two) bad(where, "r > 0 requires p = 2 in the p list");
  }
  if (wants(s, "weak_korn")) {
    if (s.annihilator.empty()) bad(where, "check weak_korn needs an 'annihilator' pair");
    try {
      s.pair = catalog_annihilator(s.annihilator);
    } catch (const Error& e) {
      bad(where, e.what());
    }
    if (s.pair->a.n() != s.op.n()) bad(where, "annihilator dimension differs from the operator's");
  }
  if ((wants(s, "constant_drift") || wants(s, "measure_data")) && s.grids.size() < 2)
    bad(where, "drift checks need at least two grids");

  // grids and domain must be constructible; masks are checked on the coarsest grid
  try {
    BoxGrid g(s.op.n(), s.grids.front(), s.length, s.pad);
    for (int n : s.grids) BoxGrid(s.op.n(), n, s.length, s.pad);
    if (s.domain.is_string()) {
      make_domain(g, standard_shape(s.domain.get<std::string>(), s.op.n()));
    } else if (s.domain.is_object() && s.domain.contains("mask_file")) {
      std::string path = resolve_path(base, s.domain.at("mask_file").get<std::string>());
      if (!fs::exists(path)) bad(where, "mask file not found: " + path);
      s.domain["mask_file"] = path;
    } else {
      make_domain(g, s.domain, base);
    }
  } catch (const ConfigError& e) {
    bad(where, e.what());
  } catch (const Error& e) {
    bad(where, e.what());
  } catch (const nlohmann::json::exception& e) {
    bad(where, std::string("domain: ") + e.what());
  }
  return s;
}

DomainMask build_mask(const BenchScenario& s, const BoxGrid& g, const std::string& base) {
  if (s.domain.is_string()) return make_domain(g, standard_shape(s.domain.get<std::string>(), g.n()));
  if (s.domain.is_object() && s.domain.contains("mask_file")) return read_mask(s.domain.at("mask_file"), g);
  return make_domain(g, s.domain, base);
}

double masked_l2(const GridField& f, const DomainMask& m) { return lp_norm(f, m, 2.0).value; }

double rel_diff(const GridField& a, const GridField& b, const DomainMask& m, double scale) {
  double s = 0.0;
  for (std::size_t i : m.indices())
    for (int c = 0; c < a.dim(); ++c) s += std::norm(a.at(i, c) - b.at(i, c));
  double d = std::sqrt(s * m.grid().cell_volume());
  return scale > 0 ? d / scale : d;
}

// f restricted pointwise to the essential range of the operator
GridField project_to_range(GridField f, const Eigen::MatrixXd& basis) {
  if (basis.cols() >= f.dim()) return f;
  Eigen::MatrixXd p = basis * basis.transpose();
  Eigen::VectorXd v(f.dim());
  for (std::size_t i = 0; i < f.grid().num_points(); ++i) {
    for (int c = 0; c < f.dim(); ++c) v(c) = f.at(i, c).real();
    Eigen::VectorXd w = p * v;
    for (int c = 0; c < f.dim(); ++c) f.at(i, c) = w(c);
  }
  return f;
}

struct Emitter {
  std::vector<BenchRow>& rows;
  int& failures;
  const BenchScenario& sc;

  BenchRow& add(int grid, const std::string& check, double p = 2.0, int r = 0) {
    BenchRow row;
    row.scenario = sc.name;
    row.grid = grid;
    row.p = p;
    row.r = r;
    row.check = check;
    rows.push_back(row);
    return rows.back();
  }
  void judge(BenchRow& row, bool ok) {
    row.status = ok ? "pass" : "fail";
    if (!ok) ++failures;
  }
  void fail(BenchRow& row, const std::string& status) {
    row.status = status;
    ++failures;
  }
};

// coarse / fine against (N_fine / N_coarse)^q
bool decays(double coarse, double fine, int n_coarse, int n_fine, double tol, double& ratio) {
  ratio = fine > 0 ? coarse / fine : kNaN;
  double expect = std::pow(static_cast<double>(n_fine) / n_coarse, kStencilOrder);
  return std::isfinite(ratio) && std::abs(ratio / expect - 1.0) <= tol;
}

struct GridStats {
  int size = 0;
  double kernel = kNaN;
  double weak_residual = kNaN;
  std::optional<ConstantReport> constants;
  std::optional<ConstantReport> weak_constants;
};

void emit_series(Emitter& em, const BenchThresholds& th, const std::vector<GridStats>& stats, bool weak) {
  const std::size_t last = stats.size() - 1;
  for (std::size_t gi = 0; gi < stats.size(); ++gi) {
    const auto& rep = weak ? stats[gi].weak_constants : stats[gi].constants;
    if (!rep) continue;
    for (std::size_t s = 0; s < rep->series.size(); ++s) {
      const RatioSeries& sr = rep->series[s];
      std::string check;
      bool gated;
      if (weak) {
        if (sr.kind != "negative_box") continue;
        check = "weak_korn:ratio";
        gated = true;
      } else {
        check = sr.kind == "measure" ? "measure_data" : "constant_drift";
        if (sr.kind == "negative_box") check += ":negative_box";
        gated = sr.gated;
      }
      BenchRow& row = em.add(stats[gi].size, check, sr.p, sr.r);
      row.max_ratio = sr.max;
      row.median_ratio = sr.median;
      row.kernel_residual = rep->kernel_residual_max;
      row.value = sr.running_max_change;
      row.threshold = th.drift;
      if (gi > 0) {
        const auto& prev = weak ? stats[gi - 1].weak_constants : stats[gi - 1].constants;
        if (prev && s < prev->series.size()) row.drift = relative_drift(prev->series[s].max, sr.max);
      }
      if (gi != last || !gated) {
        row.status = "info";
        continue;
      }
      bool ok = std::isfinite(sr.max) && std::isfinite(row.drift) && row.drift < th.drift;
      if (!weak) ok = ok && sr.running_max_change < th.running_max;
      em.judge(row, ok);
    }
  }
}

void emit_decay(Emitter& em, const BenchThresholds& th, const std::vector<GridStats>& stats, const std::string& check,
                double GridStats::*field) {
  for (std::size_t gi = 0; gi < stats.size(); ++gi) {
    BenchRow& row = em.add(stats[gi].size, check);
    row.kernel_residual = stats[gi].*field;
    row.value = stats[gi].*field;
    row.threshold = th.decay;
    if (gi == 0) {
      if (stats.size() > 1) {
        row.status = "info";
      } else {
        em.judge(row, std::isfinite(row.value));
      }
      continue;
    }
    double ratio;
    bool ok = decays(stats[gi - 1].*field, stats[gi].*field, stats[gi - 1].size, stats[gi].size, th.decay, ratio);
    row.drift = ratio;
    if (gi + 1 < stats.size())
      row.status = "info";
    else
      em.judge(row, ok);
  }
}

void run_scenario(const BenchScenario& sc, const BenchConfig& cfg, const BenchOptions& opt, std::vector<BenchRow>& rows,
                  int& failures) {
  const BenchThresholds& th = cfg.thresholds;
  Emitter em{rows, failures, sc};
  const double solve_tol = opt.solve_tol.value_or(th.solve_residual);
  EnsembleConfig ens = sc.ensemble;
  if (opt.seed) ens.seed = *opt.seed;
  const int pad = opt.pad.value_or(sc.pad);
  const std::vector<int>& grids = opt.grids.empty() ? sc.grids : opt.grids;
  const OperatorSpec& a = sc.op;
  const int k = a.order();

  bool needs_t = false;
  for (auto& c : sc.checks) needs_t = needs_t || c != "weak_korn";
  std::optional<Classification> cls;
  bool maximal = false;
  try {
    cls = classify(a);
    maximal = cls->is_maximal_rank;
  } catch (const Error& e) {
    for (int n : grids)
      for (auto& c : sc.checks) em.fail(em.add(n, c), std::string("error: ") + e.what());
    return;
  }

  std::vector<GridStats> stats;
  for (int size : grids) {
    GridStats gs;
    gs.size = size;
    std::optional<BoxGrid> grid;
    std::optional<DomainMask> mask;
    try {
      grid.emplace(a.n(), size, sc.length, pad);
      mask.emplace(build_mask(sc, *grid, cfg.base_dir));
    } catch (const Error& e) {
      for (auto& c : sc.checks) em.fail(em.add(size, c), std::string("error: ") + e.what());
      stats.push_back(gs);
      continue;
    }
    ProjectionOptions po;
    po.ps = sc.ps;
    po.compute_norms = false;
    // the residual region stays physically fixed along the ladder
    po.residual_margin = interior_radius(std::max(k, 1), kStencilOrder) * size / grids.front();

    if (needs_t && !maximal) {
      for (auto& c : sc.checks)
        if (c != "weak_korn" && c != "constant_drift" && c != "measure_data") em.fail(em.add(size, c), kNotMaximal);
    } else if (needs_t) {
      try {
        KornProjector proj(a, *grid, po);
        if (wants(sc, "solve_residual")) {
          BenchRow& row = em.add(size, "solve_residual");
          GridField f = random_band_limited(*grid, a.dim_w(), ens.band, sample_seed(ens.seed, 1u << 20));
          f = project_to_range(std::move(f), cls->essential_range);
          SolveResult s = proj.solver().solve(f, *mask, true);
          row.value = s.residual;
          row.threshold = solve_tol;
          em.judge(row, s.residual <= solve_tol);
        }
        bool one = wants(sc, "idempotence") || wants(sc, "kernel_residual") || wants(sc, "helmholtz");
        if (one) {
          GridField spec = random_band_limited_spectrum(*grid, a.dim_v(), ens.band, sample_seed(ens.seed, 0));
          ProjectionResult r1 = proj.project_spectrum(spec, *mask);
          const double u2 = masked_l2(r1.u_box, *mask);
          const double au2 = masked_l2(r1.au, *mask);
          if (wants(sc, "idempotence")) {
            BenchRow& row = em.add(size, "idempotence");
            // T was built on the stencil operator, so T(Tu) takes the stencil A(Tu) as data
            GridField at = fd_apply(a, r1.t_box, mask->indices(), kStencilOrder);
            ProjectionResult r2 = proj.project(r1.t_box, at, *mask);
            // the defect is A_h^-1 of the stencil error in A u, so it scales with the solved part
            row.value = rel_diff(r2.t_u, r1.t_u, *mask, masked_l2(r1.w.sample(), *mask));
            row.threshold = stencil_tolerance(kStencilOrder, ens.band, size);
            em.judge(row, row.value <= row.threshold);
          }
          if (wants(sc, "helmholtz")) {
            BenchRow& row = em.add(size, "helmholtz");
            GridField sum = r1.t_u;
            sum += r1.w.sample();
            row.value = rel_diff(sum, r1.u_box, *mask, u2);
            row.threshold = th.helmholtz;
            em.judge(row, row.value <= th.helmholtz);
          }
          gs.kernel = au2 > 0 ? r1.kernel_residual.value / au2 : kNaN;
        }
      } catch (const PreconditionError& e) {
        for (auto& c : sc.checks)
          if (c == "solve_residual" || c == "idempotence" || c == "helmholtz")
            em.fail(em.add(size, c), std::string("precondition-failed: ") + e.what());
      } catch (const Error& e) {
        for (auto& c : sc.checks)
          if (c == "solve_residual" || c == "idempotence" || c == "helmholtz")
            em.fail(em.add(size, c), std::string("error: ") + e.what());
      }
      if (wants(sc, "constant_drift") || wants(sc, "measure_data")) {
        ConstantOptions co;
        co.projection = po;
        co.threads = opt.threads;
        co.negative = false;
        for (int r : sc.rs)
          if (r > 0) {
            co.negative = true;
            co.negative_orders.push_back(r);
          }
        co.measure_data = wants(sc, "measure_data");
        try {
          gs.constants = empirical_constant(a, *grid, *mask, co, ens);
          if (!wants(sc, "constant_drift")) {
            auto& v = gs.constants->series;
            v.erase(std::remove_if(v.begin(), v.end(), [](const RatioSeries& s) { return s.kind != "measure"; }),
                    v.end());
          }
        } catch (const Error& e) {
          em.fail(em.add(size, "constant_drift"), std::string("error: ") + e.what());
        }
      }
    }

    if (wants(sc, "weak_korn")) {
      try {
        BenchRow& row = em.add(size, "weak_korn:multiplier");
        row.value = delta_w_closed_form_error(*sc.pair, *grid);
        row.threshold = th.delta_w_multiplier;
        em.judge(row, row.value <= th.delta_w_multiplier);
        ProjectionOptions wpo = po;
        wpo.ps = {2.0};
        wpo.residual_margin =
            interior_radius(2 * sc.pair->a.order(), kStencilOrder) * size / grids.front();
        WeakKornProjector wp(*sc.pair, *grid, wpo);
        GridField spec = random_band_limited_spectrum(*grid, sc.pair->a.dim_v(), ens.band, sample_seed(ens.seed, 0));
        ProjectionResult r = wp.project_spectrum(spec, *mask);
        double au2 = masked_l2(r.au, *mask);
        gs.weak_residual = au2 > 0 ? r.kernel_residual.value / au2 : kNaN;
        if (grids.size() > 1) {
          ConstantOptions co;
          co.projection = wpo;
          co.threads = opt.threads;
          co.measure_data = false;
          gs.weak_constants = empirical_constant(*sc.pair, *grid, *mask, co, ens);
        }
      } catch (const PreconditionError& e) {
        em.fail(em.add(size, "weak_korn"), std::string("precondition-failed: ") + e.what());
      } catch (const Error& e) {
        em.fail(em.add(size, "weak_korn"), std::string("error: ") + e.what());
      }
    }
    stats.push_back(std::move(gs));
  }

  if (maximal && wants(sc, "kernel_residual")) emit_decay(em, th, stats, "kernel_residual", &GridStats::kernel);
  if (maximal && (wants(sc, "constant_drift") || wants(sc, "measure_data"))) emit_series(em, th, stats, false);
  if (!maximal)
    for (int n : grids)
      for (auto& c : sc.checks)
        if (c == "kernel_residual" || c == "constant_drift" || c == "measure_data") em.fail(em.add(n, c), kNotMaximal);
  if (wants(sc, "weak_korn")) {
    emit_decay(em, th, stats, "weak_korn:residual", &GridStats::weak_residual);
    if (stats.size() > 1) emit_series(em, th, stats, true);
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

BenchConfig parse_bench_config(const Json& j, const std::string& base_dir) {
  BenchConfig cfg;
  cfg.base_dir = base_dir;
  const Json* list = &j;
  if (j.is_object()) {
    check_keys(j, {"format", "scenarios", "thresholds"}, "config");
    if (j.contains("format") && j.at("format") != kBenchFormat)
      bad("config", "unsupported format '" + j.at("format").dump() + "'");
    if (!j.contains("scenarios")) bad("config", "field 'scenarios' is missing");
    list = &j.at("scenarios");
    if (j.contains("thresholds")) {
      const Json& t = j.at("thresholds");
      if (!t.is_object()) bad("config", "'thresholds' must be an object");
      check_keys(t, {"solve_residual", "helmholtz", "drift", "running_max", "decay", "delta_w_multiplier"},
                 "thresholds");
      BenchThresholds& th = cfg.thresholds;
      th.solve_residual = get_or<double>(t, "solve_residual", th.solve_residual, "thresholds");
      th.helmholtz = get_or<double>(t, "helmholtz", th.helmholtz, "thresholds");
      th.drift = get_or<double>(t, "drift", th.drift, "thresholds");
      th.running_max = get_or<double>(t, "running_max", th.running_max, "thresholds");
      th.decay = get_or<double>(t, "decay", th.decay, "thresholds");
      th.delta_w_multiplier = get_or<double>(t, "delta_w_multiplier", th.delta_w_multiplier, "thresholds");
    }
  }
  if (!list->is_array()) bad("config", "'scenarios' must be an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    cfg.scenarios.push_back(parse_scenario((*list)[i], i, base_dir));
    if (!names.insert(cfg.scenarios.back().name).second)
      bad("scenario '" + cfg.scenarios.back().name + "'", "duplicate scenario name");
  }
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  Json j = read_json_file(path);
  return parse_bench_config(j, fs::path(path).parent_path().string());
}

BenchReport run_bench(const BenchConfig& config, const BenchOptions& opt) {
  BenchReport rep;
  for (const auto& sc : config.scenarios) {
    try {
      run_scenario(sc, config, opt, rep.rows, rep.failures);
    } catch (const std::exception& e) {
      BenchRow row;
      row.scenario = sc.name;
      row.check = "scenario";
      row.status = std::string("error: ") + e.what();
      rep.rows.push_back(row);
      ++rep.failures;
    }
  }
  return rep;
}

std::string bench_csv(const BenchReport& report) {
  std::string out = std::string("# ") + kBenchFormat + "\n";
  out += "scenario,grid,p,r,check,max_ratio,median_ratio,drift,kernel_residual,value,threshold,status\n";
  for (const auto& r : report.rows) {
    out += csv_field(r.scenario) + "," + std::to_string(r.grid) + "," + fmt(r.p) + "," + std::to_string(r.r) + "," +
           csv_field(r.check) + "," + fmt(r.max_ratio) + "," + fmt(r.median_ratio) + "," + fmt(r.drift) + "," +
           fmt(r.kernel_residual) + "," + fmt(r.value) + "," + fmt(r.threshold) + "," + csv_field(r.status) + "\n";
  }
  return out;
}

Json bench_summary(const BenchReport& report, const BenchConfig& config, const Json& metadata) {
  Json j;
  j["format"] = kBenchFormat;
  j["metadata"] = metadata;
  const BenchThresholds& th = config.thresholds;
  j["thresholds"] = {{"solve_residual", th.solve_residual}, {"helmholtz", th.helmholtz},
                     {"drift", th.drift},                   {"running_max", th.running_max},
                     {"decay", th.decay},                   {"delta_w_multiplier", th.delta_w_multiplier}};
  j["passed"] = report.passed();
  j["failures"] = report.failures;
  Json scen = Json::array();
  for (const auto& sc : config.scenarios) {
    int pass = 0, fail = 0, info = 0;
    for (const auto& r : report.rows) {
      if (r.scenario != sc.name) continue;
      if (r.status == "pass")
        ++pass;
      else if (r.status == "info")
        ++info;
      else
        ++fail;
    }
    scen.push_back({{"name", sc.name},
                    {"operator", sc.operator_ref},
                    {"domain", sc.domain},
                    {"grids", sc.grids},
                    {"checks", sc.checks},
                    {"passed", pass},
                    {"failed", fail},
                    {"info", info},
                    {"status", fail == 0 ? "pass" : "fail"}});
  }
  j["scenarios"] = scen;
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"scenario", r.scenario},
                    {"grid", r.grid},
                    {"p", r.p},
                    {"r", r.r},
                    {"check", r.check},
                    {"max_ratio", num(r.max_ratio)},
                    {"median_ratio", num(r.median_ratio)},
                    {"drift", num(r.drift)},
                    {"kernel_residual", num(r.kernel_residual)},
                    {"value", num(r.value)},
                    {"threshold", num(r.threshold)},
                    {"status", r.status}});
  j["rows"] = rows;
  return j;
}

void write_bench_outputs(const std::string& out_dir, const BenchReport& report, const BenchConfig& config,
                         const Json& metadata) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());
  {
    std::ofstream f(fs::path(out_dir) / "bench.csv", std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(out_dir) / "bench.csv").string());
    f << bench_csv(report);
  }
  std::ofstream f(fs::path(out_dir) / "summary.json", std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (fs::path(out_dir) / "summary.json").string());
  f << bench_summary(report, config, metadata).dump(2) << "\n";
}

}  // namespace korn

// korn: command-line front end.
//
//   korn classify <catalog:ref | spec.json> [--n N] [--seed S] [--tol T] [--out-dir D]
//   korn catalog list
//   korn catalog dump <ref> [--n N] [--out-dir D]
//   korn generate field --n 2 --grid 64 --dim 2 --band 6 --seed 1 --out f.bin
//   korn generate mask --n 2 --grid 64 --domain disk --out m.bin
//   korn solve --operator <ref> --rhs f.bin --mask m.bin [--pad 2] [--tol 1e-8] --out v.bin --report r.json
//   korn project --operator <ref> --u u.bin [--au au.bin] --mask m.bin [--report r.json] [--out t.bin]
//   korn bench <config.json> [--seed S] [--grid 64,128] [--pad P] [--tol T] [--out-dir D]
//
// Exit status: 0 success, 1 failed checks or unmet preconditions, 2 configuration errors.
// KORN_THREADS overrides the worker count.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "korn/bench.hpp"
#include "korn/catalog.hpp"
#include "korn/classify.hpp"
#include "korn/domain.hpp"
#include "korn/error.hpp"
#include "korn/field_io.hpp"
#include "korn/multiplier.hpp"
#include "korn/parallel.hpp"
#include "korn/projection.hpp"
#include "korn/random_field.hpp"
#include "korn/solver.hpp"
#include "korn/spec_io.hpp"

namespace fs = std::filesystem;
using namespace korn;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void check_threads_env() {
  const char* s = std::getenv("KORN_THREADS");
  if (!s) return;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1) throw ConfigError(std::string("KORN_THREADS must be a positive integer, got '") + s + "'");
}

void write_json(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

// "catalog:sym_gradient" with --n 3 means sym_gradient(3)
OperatorSpec load_operator(const std::string& ref, int n) {
  if (ref.rfind("catalog:", 0) == 0 && n > 0 && ref.find('(') == std::string::npos) {
    std::string name;
    std::vector<int> params;
    parse_ref(ref.substr(8), name, params);
    for (auto& info : catalog_names())
      if (info.name == name && !info.params.empty() && info.params.front() == "n")
        return make_catalog_operator(name, {n}).spec;
  }
  return resolve_operator(ref);
}

DomainMask load_mask(const std::string& mask_file, const std::string& domain, const BoxGrid& g) {
  if (!mask_file.empty()) return read_mask(mask_file, g);
  if (domain.empty()) throw ConfigError("either --mask or --domain is required");
  if (fs::exists(domain)) return make_domain(g, read_json_file(domain), fs::path(domain).parent_path().string());
  return make_domain(g, standard_shape(domain, g.n()));
}

Json warnings_json(const std::vector<std::string>& w) { return Json(w); }

Json norm_json(const NormReport& r) {
  return {{"name", r.name}, {"p", r.p}, {"order", r.order}, {"value", r.value}, {"cells", r.cells}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-rank operator toolkit: classification, spectral solves, Korn projections, benchmarks"};
  app.require_subcommand(1);

  // shared flags
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string grid_arg;
  int pad = 2;
  double tol = 0.0;
  std::string out_dir;
  int n_param = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "directory for report files");
  };

  auto* classify_cmd = app.add_subcommand("classify", "classify the principal symbol of an operator");
  std::string classify_ref;
  classify_cmd->add_option("operator", classify_ref, "catalog:<ref> or operator JSON file")->required();
  classify_cmd->add_option("--n", n_param, "dimension for catalog entries given without parameters");
  classify_cmd->add_option("--seed", seed, "sphere sampling seed")->each([&](const std::string&) { seed_set = true; });
  classify_cmd->add_option("--tol", tol, "relative rank tolerance");
  add_common(classify_cmd);

  auto* catalog_cmd = app.add_subcommand("catalog", "list catalog entries or dump one as operator JSON");
  catalog_cmd->require_subcommand(1);
  auto* cat_list = catalog_cmd->add_subcommand("list", "list entry names and parameters");
  auto* cat_dump = catalog_cmd->add_subcommand("dump", "print the operator JSON of an entry");
  std::string dump_ref;
  cat_dump->add_option("name", dump_ref, "catalog reference, e.g. div_k(2,2)")->required();
  cat_dump->add_option("--n", n_param, "dimension for entries given without parameters");
  add_common(cat_dump);

  auto* gen_cmd = app.add_subcommand("generate", "write sample inputs");
  gen_cmd->require_subcommand(1);
  int gen_n = 2, gen_dim = 1, gen_band = 6;
  std::string gen_out, gen_domain = "disk";
  auto* gen_field = gen_cmd->add_subcommand("field", "seeded band-limited real field");
  auto* gen_mask = gen_cmd->add_subcommand("mask", "rasterised domain mask");
  for (auto* s : {gen_field, gen_mask}) {
    s->add_option("--n", gen_n, "dimension")->required();
    s->add_option("--grid", grid_arg, "points per axis")->required();
    s->add_option("--pad", pad, "padding factor");
    s->add_option("--out", gen_out, "output file")->required();
  }
  gen_field->add_option("--dim", gen_dim, "components");
  gen_field->add_option("--band", gen_band, "frequency band limit");
  gen_field->add_option("--seed", seed, "seed");
  gen_mask->add_option("--domain", gen_domain, "disk | square | two_ball | blob | shape JSON file");

  auto* solve_cmd = app.add_subcommand("solve", "solve A v = f on a masked domain");
  std::string op_ref, rhs_file, mask_file, domain_arg, out_file, report_file, scheme = "spectral";
  solve_cmd->add_option("--operator", op_ref, "catalog:<ref> or operator JSON file")->required();
  solve_cmd->add_option("--rhs", rhs_file, "right-hand side field file")->required();
  solve_cmd->add_option("--mask", mask_file, "mask file");
  solve_cmd->add_option("--domain", domain_arg, "domain family or shape JSON file, instead of --mask");
  solve_cmd->add_option("--grid", grid_arg, "expected points per axis (checked against the field)");
  solve_cmd->add_option("--pad", pad, "padding factor");
  solve_cmd->add_option("--tol", tol, "fail if the relative residual exceeds this");
  solve_cmd->add_option("--scheme", scheme, "spectral | central2 | central4 | ...");
  solve_cmd->add_option("--out", out_file, "solution field file");
  solve_cmd->add_option("--report", report_file, "report JSON");
  add_common(solve_cmd);

  auto* project_cmd = app.add_subcommand("project", "Korn projection T u (or weak Korn projection)");
  std::string u_file, au_file, pair_ref;
  std::vector<double> ps{2.0};
  std::string proj_scheme = "central4";
  project_cmd->add_option("--operator", op_ref, "catalog:<ref> or operator JSON file");
  project_cmd->add_option("--annihilator", pair_ref, "catalog annihilator pair; selects the weak projection");
  project_cmd->add_option("--u", u_file, "input field file")->required();
  project_cmd->add_option("--au", au_file, "A u on the mask; computed spectrally if absent");
  project_cmd->add_option("--mask", mask_file, "mask file");
  project_cmd->add_option("--domain", domain_arg, "domain family or shape JSON file, instead of --mask");
  project_cmd->add_option("--grid", grid_arg, "expected points per axis (checked against the field)");
  project_cmd->add_option("--pad", pad, "padding factor");
  project_cmd->add_option("--tol", tol, "fail if the interior residual relative to |A u| exceeds this");
  project_cmd->add_option("--p", ps, "Lp exponents for the report");
  project_cmd->add_option("--scheme", proj_scheme, "spectral | central2 | central4 | ...");
  project_cmd->add_option("--out", out_file, "T u field file");
  project_cmd->add_option("--report", report_file, "report JSON");
  add_common(project_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "run a scenario file");
  std::string config_file;
  bench_cmd->add_option("config", config_file, "scenario JSON")->required();
  bench_cmd->add_option("--seed", seed, "override every ensemble seed")->each([&](const std::string&) { seed_set = true; });
  bench_cmd->add_option("--grid", grid_arg, "override every grid ladder, e.g. 64,128");
  bench_cmd->add_option("--pad", pad, "override every padding factor");
  bench_cmd->add_option("--tol", tol, "override the solve residual threshold");
  bench_cmd->add_option("--out-dir", out_dir, "output directory")->default_val("bench-out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    check_threads_env();

    if (*classify_cmd) {
      SamplingConfig sc;
      if (seed_set) sc.seed = seed;
      if (tol > 0) sc.rank_tol = tol;
      OperatorSpec a = load_operator(classify_ref, n_param);
      Classification c = classify(a, sc);
      Json j = classification_to_json(c);
      j["operator"] = a.name().empty() ? classify_ref : a.name();
      j["provenance"] = {{"seed", sc.seed}, {"rank_tol", sc.rank_tol}, {"projector_tol", sc.projector_tol},
                         {"samples", sc.quasi_uniform + sc.random}};
      std::cout << j.dump(2) << "\n";
      if (!out_dir.empty()) write_json(fs::path(out_dir) / "classification.json", j);
      return 0;
    }

    if (*catalog_cmd) {
      if (*cat_list) {
        for (const auto& e : catalog_names()) {
          std::string params;
          for (std::size_t i = 0; i < e.params.size(); ++i) params += (i ? "," : "") + e.params[i];
          std::cout << e.name << "(" << params << ")  " << e.description << "\n";
        }
        std::cout << "\nannihilator pairs:\n";
        for (const auto& e : annihilator_names()) {
          std::string params;
          for (std::size_t i = 0; i < e.params.size(); ++i) params += (i ? "," : "") + e.params[i];
          std::cout << e.name << "(" << params << ")  " << e.description << "\n";
        }
        return 0;
      }
      std::string ref = dump_ref.rfind("catalog:", 0) == 0 ? dump_ref : "catalog:" + dump_ref;
      OperatorSpec a = load_operator(ref, n_param);
      Json j = operator_to_json(a);
      std::cout << j.dump(2) << "\n";
      if (!out_dir.empty()) write_json(fs::path(out_dir) / (a.name() + ".json"), j);
      return 0;
    }

    if (*gen_cmd) {
      BoxGrid g(gen_n, std::stoi(grid_arg), 1.0, pad);
      if (*gen_field) {
        write_field(gen_out, random_band_limited(g, gen_dim, gen_band, seed));
      } else {
        write_mask(gen_out, load_mask("", gen_domain, g));
      }
      return 0;
    }

    if (*solve_cmd) {
      GridField f = read_field(rhs_file, pad);
      if (!grid_arg.empty() && std::stoi(grid_arg) != f.grid().size())
        throw ConfigError("--grid " + grid_arg + " does not match the field size " + std::to_string(f.grid().size()));
      OperatorSpec a = load_operator(op_ref, f.grid().n());
      DomainMask m = load_mask(mask_file, domain_arg, f.grid());
      SolveOptions so;
      so.disc = parse_discretization(scheme);
      SpectralSolver solver(a, f.grid(), so);
      auto t0 = std::chrono::steady_clock::now();
      SolveResult r = solver.solve(f, m, true);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      MultiplierBounds mb = multiplier_bounds(a, solver.pinv_table(), so.disc);
      bool ok = tol <= 0 || r.residual <= tol;
      Json j = {{"operator", a.name()},
                {"grid", f.grid().size()},
                {"n", f.grid().n()},
                {"pad", pad},
                {"scheme", to_string(so.disc)},
                {"mask_cells", m.count()},
                {"residual", r.residual},
                {"rhs_norm", r.rhs_norm},
                {"polynomial_residual", r.polynomial_residual},
                {"mean", std::vector<double>(r.mean.data(), r.mean.data() + r.mean.size())},
                {"projector_sup", mb.projector_sup},
                {"mihlin_sup", mb.mihlin_sup},
                {"tolerance", tol},
                {"passed", ok},
                {"seconds", secs},
                {"warnings", warnings_json(r.warnings)}};
      std::cout << "residual " << r.residual << (ok ? "" : "  (exceeds --tol)") << "\n";
      if (!out_file.empty()) write_field(out_file, r.v.sample());
      if (!report_file.empty()) write_json(report_file, j);
      if (!out_dir.empty()) write_json(fs::path(out_dir) / "solve_report.json", j);
      return ok ? 0 : kExitFail;
    }

    if (*project_cmd) {
      GridField u = read_field(u_file, pad);
      if (!grid_arg.empty() && std::stoi(grid_arg) != u.grid().size())
        throw ConfigError("--grid " + grid_arg + " does not match the field size " + std::to_string(u.grid().size()));
      DomainMask m = load_mask(mask_file, domain_arg, u.grid());
      ProjectionOptions po;
      po.disc = parse_discretization(proj_scheme);
      po.ps = ps;
      ProjectionResult r;
      std::string name;
      if (!pair_ref.empty()) {
        AnnihilatorPair pair = catalog_annihilator(pair_ref);
        name = pair.name;
        r = WeakKornProjector(pair, u.grid(), po).project(BoxField(u), m);
      } else {
        if (op_ref.empty()) throw ConfigError("project needs --operator or --annihilator");
        OperatorSpec a = load_operator(op_ref, u.grid().n());
        name = a.name();
        KornProjector proj(a, u.grid(), po);
        if (au_file.empty()) {
          r = proj.project(BoxField(u), m);
        } else {
          GridField au = read_field(au_file, pad);
          if (!(au.grid() == u.grid())) throw DimensionError("--au grid differs from --u grid");
          r = proj.project(u, au, m);
        }
      }
      double au2 = lp_norm(r.au, m, 2.0).value;
      double rel = au2 > 0 ? r.kernel_residual.value / au2 : r.kernel_residual.value;
      bool ok = tol <= 0 || (std::isfinite(rel) && rel <= tol);
      Json norms = Json::array(), consts = Json::array();
      for (auto& x : r.norms) norms.push_back(norm_json(x));
      for (auto& x : r.constants) consts.push_back({{"name", x.name}, {"p", x.p}, {"value", x.value}});
      Json j = {{"operator", name},
                {"grid", u.grid().size()},
                {"n", u.grid().n()},
                {"scheme", to_string(po.disc)},
                {"mask_cells", m.count()},
                {"kernel_residual", norm_json(r.kernel_residual)},
                {"kernel_residual_relative", std::isfinite(rel) ? Json(rel) : Json(nullptr)},
                {"norms", norms},
                {"constants", consts},
                {"tolerance", tol},
                {"passed", ok},
                {"warnings", warnings_json(r.warnings)}};
      std::cout << "interior residual (relative) " << rel << (ok ? "" : "  (exceeds --tol)") << "\n";
      for (auto& x : r.constants) std::cout << x.name << " p=" << x.p << " " << x.value << "\n";
      if (!out_file.empty()) write_field(out_file, r.t_u);
      if (!report_file.empty()) write_json(report_file, j);
      if (!out_dir.empty()) write_json(fs::path(out_dir) / "project_report.json", j);
      return ok ? 0 : kExitFail;
    }

    if (*bench_cmd) {
      BenchConfig cfg = load_bench_config(config_file);
      BenchOptions bo;
      if (seed_set) bo.seed = seed;
      if (tol > 0) bo.solve_tol = tol;
      if (bench_cmd->count("--pad")) bo.pad = pad;
      if (!grid_arg.empty()) {
        std::stringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) bo.grids.push_back(std::stoi(tok));
        for (std::size_t i = 1; i < bo.grids.size(); ++i)
          if (bo.grids[i] <= bo.grids[i - 1]) throw ConfigError("--grid sizes must be strictly increasing");
        for (int n : bo.grids)
          if (n < 4 || (n & (n - 1)) != 0) throw ConfigError("--grid size " + std::to_string(n) + " is not a power of two");
      }
      std::string started = iso_now();
      auto t0 = std::chrono::steady_clock::now();
      BenchReport rep = run_bench(cfg, bo);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      Json meta = {{"config", config_file},       {"started", started},
                   {"finished", iso_now()},       {"seconds", secs},
                   {"threads", thread_count()},   {"seed_override", seed_set ? Json(seed) : Json(nullptr)}};
      write_bench_outputs(out_dir, rep, cfg, meta);
      int pass = 0, info = 0;
      for (auto& r : rep.rows) {
        if (r.status == "pass")
          ++pass;
        else if (r.status == "info")
          ++info;
        else
          std::cout << "FAIL " << r.scenario << " grid=" << r.grid << " " << r.check << " p=" << r.p << " r=" << r.r
                    << ": " << r.status << "\n";
      }
      std::cout << rep.rows.size() << " rows: " << pass << " pass, " << rep.failures << " fail, " << info
                << " info; " << secs << " s; output in " << out_dir << "\n";
      return rep.passed() ? 0 : kExitFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: bad number: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: number out of range: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}

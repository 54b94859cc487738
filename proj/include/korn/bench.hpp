#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "korn/projection.hpp"
#include "korn/spec_io.hpp"

namespace korn {

inline constexpr const char* kBenchFormat = "korn-bench/1";

inline const std::vector<std::string>& bench_check_names() {
  static const std::vector<std::string> names{"solve_residual", "idempotence", "kernel_residual", "constant_drift",
                                              "helmholtz",      "weak_korn",   "measure_data"};
  return names;
}

struct BenchThresholds {
  double solve_residual = 1e-8;
  double helmholtz = 1e-12;
  double drift = 0.2;
  double running_max = 0.1;
  double decay = 0.2;            ///< |ratio / 2^q - 1| allowed for the residual decay
  double delta_w_multiplier = 1e-10;
};

struct BenchScenario {
  std::string name;
  std::string operator_ref;     ///< "catalog:<ref>" or operator JSON path
  std::string annihilator;      ///< catalog pair reference, required by weak_korn
  Json domain;                  ///< family name, shape expression or {"mask_file": path}
  std::vector<int> grids;
  int pad = 2;
  double length = 1.0;
  std::vector<double> ps{2.0};
  std::vector<int> rs{0};
  EnsembleConfig ensemble;
  std::vector<std::string> checks;

  // filled in by parse_bench_config
  OperatorSpec op;
  std::optional<AnnihilatorPair> pair;
};

struct BenchConfig {
  std::vector<BenchScenario> scenarios;
  BenchThresholds thresholds;
  std::string base_dir;  ///< relative paths resolve here
};

/// Throws ConfigError naming the scenario and field for anything malformed.
BenchConfig parse_bench_config(const Json& j, const std::string& base_dir = "");
/// Parse errors carry line:column.
BenchConfig load_bench_config(const std::string& path);

struct BenchOptions {
  std::optional<std::uint64_t> seed;   ///< overrides every scenario seed
  std::optional<double> solve_tol;     ///< overrides thresholds.solve_residual
  std::optional<int> pad;              ///< overrides every scenario pad factor
  std::vector<int> grids;              ///< nonempty: replaces every ladder
  int threads = 0;
};

struct BenchRow {
  std::string scenario;
  int grid = 0;
  double p = 2.0;
  int r = 0;
  std::string check;       ///< check name, with a ":series" suffix where one check emits several
  double max_ratio = std::numeric_limits<double>::quiet_NaN();
  double median_ratio = std::numeric_limits<double>::quiet_NaN();
  double drift = std::numeric_limits<double>::quiet_NaN();
  double kernel_residual = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::string status;      ///< "pass", "fail", "info", or "precondition-failed: ..." / "error: ..."
};

struct BenchReport {
  std::vector<BenchRow> rows;
  int failures = 0;
  bool passed() const { return failures == 0; }
};

/// Every scenario runs even if earlier ones fail. Row order and values depend only on
/// the configuration, never on the thread count.
BenchReport run_bench(const BenchConfig& config, const BenchOptions& opt = {});

std::string bench_csv(const BenchReport& report);
/// `metadata` is copied verbatim; it is the only place run-dependent data belongs.
Json bench_summary(const BenchReport& report, const BenchConfig& config, const Json& metadata);

/// Writes bench.csv and summary.json into out_dir (created if needed).
void write_bench_outputs(const std::string& out_dir, const BenchReport& report, const BenchConfig& config,
                         const Json& metadata);

}  // namespace korn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "korn/linalg.hpp"
#include "korn/symbol.hpp"

namespace korn {

struct SamplingConfig {
  int quasi_uniform = 512;
  int random = 512;
  std::uint64_t seed = 20240917;
  double rank_tol = kRankTol;
  /// cancellation intersection stops once its dimension held for this many samples
  int stable_window = 32;
  /// two image projectors count as equal if they differ by at most this (spectral norm)
  double projector_tol = 1e-8;
};

/// Deterministic unit vectors: config.quasi_uniform low-discrepancy points followed by
/// config.random seeded pseudo-random ones.
std::vector<Eigen::VectorXd> sphere_samples(int n, const SamplingConfig& config);

/// Sampled classification of a symbol over the unit sphere. Every flag is a sampled
/// verdict, not a proof.
struct Classification {
  int n = 0;
  int dim_v = 0;
  int dim_w = 0;
  int order = 0;
  int rank_min = 0;
  int rank_max = 0;
  bool is_constant_rank = false;
  bool is_elliptic = false;
  bool is_elliptic_system = false;
  bool is_maximal_rank = false;
  bool is_canceling = false;
  int essential_range_dim = 0;
  int cancellation_dim = 0;
  /// min over samples of sigma_{dim_v}(A(xi)); 0 when dim_v > dim_w
  double min_singular_on_sphere = 0.0;
  /// max over samples of |P(xi) - P(xi_0)| for the image projectors
  double projector_variation = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// orthonormal basis of the essential range (columns)
  Eigen::MatrixXd essential_range;
};

/// Throws PreconditionError for the zero operator.
Classification classify(const OperatorSpec& a, const SamplingConfig& config = {});

/// Pair (A, Q) with A: V -> W, Q: W -> X and im A(xi) = ker Q(xi) for xi != 0.
struct AnnihilatorPair {
  OperatorSpec a;
  OperatorSpec q;
  std::string name;
};

struct AnnihilatorReport {
  bool ok = false;
  double max_composition = 0.0;  ///< max |Q(xi) A(xi)| / (|Q(xi)| |A(xi)|)
  int rank_a = 0;
  int rank_q = 0;
  bool ranks_constant = false;
  std::string message;
};

AnnihilatorReport verify_annihilator(const AnnihilatorPair& pair, const SamplingConfig& config = {});

/// Operator with symbol (A A^T)^{kQ} + (Q^T Q)^{k}, homogeneous of order 2 k kQ.
/// As a differential operator it equals (-1)^{k kQ} ([A A*]^{kQ} + [Q* Q]^{k}).
OperatorSpec delta_w(const AnnihilatorPair& pair);

}  // namespace korn

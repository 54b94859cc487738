#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "korn/classify.hpp"
#include "korn/norms.hpp"
#include "korn/solver.hpp"

namespace korn {

struct ProjectionOptions {
  /// scheme for the solve and for derivative norms; its stencil order also sets the
  /// interior-residual stencil
  Discretization disc = Discretization::central(4);
  std::vector<double> ps{2.0};
  bool compute_norms = true;
  bool compensate_corners = true;
  double rank_tol = kRankTol;
  /// lower bound (cells) on the interior-residual margin
  int residual_margin = 0;
};

struct NamedValue {
  std::string name;
  double p = 2.0;
  double value = 0.0;
};

struct ProjectionResult {
  GridField t_u;         ///< A-free part on the mask, zero elsewhere
  BoxField w;            ///< solved part on the whole box
  GridField u_box;       ///< sampled u (box inputs only, else empty)
  GridField t_box;       ///< u - w on the whole box (box inputs only, else empty)
  GridField au;          ///< the A u data actually used
  NormReport kernel_residual;
  std::vector<NormReport> norms;
  std::vector<NamedValue> constants;
  std::vector<std::string> warnings;
};

/// T u = u - A^{-1}[A u] for a maximal-rank operator, with the solver tables built once.
class KornProjector {
 public:
  KornProjector(const OperatorSpec& a, const BoxGrid& grid, const ProjectionOptions& opt = {});
  const OperatorSpec& spec() const { return solver_.spec(); }
  const ProjectionOptions& options() const { return opt_; }
  const SpectralSolver& solver() const { return solver_; }

  /// u and au given on the mask (values elsewhere ignored).
  ProjectionResult project(const GridField& u, const GridField& au, const DomainMask& mask) const;
  /// u on the whole box; A u computed spectrally.
  ProjectionResult project(const BoxField& u, const DomainMask& mask) const;
  /// u on the whole box with caller-supplied au; throws PreconditionError if au does not
  /// match the spectral A u on the mask to `consistency_tol` relative.
  ProjectionResult project(const BoxField& u, const GridField& au, const DomainMask& mask,
                           double consistency_tol = 1e-6) const;
  /// Real periodic u given by its unnormalised DFT.
  ProjectionResult project_spectrum(const GridField& u_spectrum, const DomainMask& mask) const;

 private:
  ProjectionResult finish(const GridField& u, const GridField& au, const DomainMask& mask,
                          const GridField* u_box) const;
  SpectralSolver solver_;
  ProjectionOptions opt_;
  MultiplierTable a_spectral_;
};

ProjectionResult korn_project(const OperatorSpec& a, const GridField& u, const GridField& au, const DomainMask& mask,
                              const ProjectionOptions& opt = {});

struct HelmholtzParts {
  GridField v;  ///< A-free part on the mask
  BoxField w;   ///< solved part
};
HelmholtzParts helmholtz_decompose(const OperatorSpec& a, const GridField& u, const GridField& au,
                                   const DomainMask& mask, const ProjectionOptions& opt = {});

/// Pi u = u - A*(A A*)^{kQ-1} S_W A u, where S_W solves Delta_W = [A A*]^{kQ} + [Q* Q]^k
/// on the mask. The kernel residual is the interior residual of Delta_A (Pi u).
class WeakKornProjector {
 public:
  /// Throws PreconditionError if the pair fails verification.
  WeakKornProjector(const AnnihilatorPair& pair, const BoxGrid& grid, const ProjectionOptions& opt = {});
  const AnnihilatorPair& pair() const { return pair_; }
  const SpectralSolver& delta_w_solver() const { return solver_; }
  /// A*(A A*)^{kQ-1}
  const OperatorSpec& back_operator() const { return back_; }
  ProjectionResult project(const BoxField& u, const DomainMask& mask) const;
  /// Real periodic u given by its unnormalised DFT.
  ProjectionResult project_spectrum(const GridField& u_spectrum, const DomainMask& mask) const;

 private:
  ProjectionResult finish(const GridField& us, GridField au, const DomainMask& mask) const;
  AnnihilatorPair pair_;
  ProjectionOptions opt_;
  SpectralSolver solver_;
  OperatorSpec back_;
  OperatorSpec laplacian_a_;
  MultiplierTable a_spectral_;
  MultiplierTable back_table_;
  int sign_ = 1;
};

ProjectionResult weak_korn_project(const AnnihilatorPair& pair, const BoxField& u, const DomainMask& mask,
                                   const ProjectionOptions& opt = {});

/// max over m of |Delta_W(m) - (2 pi |m| / L)^{2 k kQ} I| / (2 pi |m| / L)^{2 k kQ} for the
/// spectral multiplier, skipping m = 0 and indices touching the Nyquist row. The closed
/// form holds when (A A^T)^{kQ} + (Q^T Q)^k is a multiple of |xi|^{2 k kQ}.
double delta_w_closed_form_error(const AnnihilatorPair& pair, const BoxGrid& grid);

/// Relative size of the error of an order-q central stencil on a field of frequency
/// band `band` sampled with `size` points per period: (2 pi band / size)^q.
double stencil_tolerance(int stencil_order, int band, int size);

// ---- empirical constants ----

struct EnsembleConfig {
  std::uint64_t seed = 1;
  int samples = 64;
  int band = 8;  ///< |m_j| <= band for every sample, independent of the grid
};

struct ConstantOptions {
  ProjectionOptions projection;      ///< projection.ps lists the r = 0 exponents
  /// p = 2, r = k: |u - Tu|_{L2} / |1_mask A u|_{H^-k(box)}, plus the same with the
  /// full-box A u in the denominator as an ungated series
  bool negative = true;
  /// orders r of the negative-norm series; empty means {k}. Numerator is W^{k-r,2}.
  std::vector<int> negative_orders;
  bool measure_data = true;          ///< |u - Tu|_{W^{k-1,q}} / |A u|_{L1}
  int threads = 0;                   ///< 0 = thread_count()
  double kernel_hit_tol = 1e-12;     ///< |A u| <= tol |u| counts as A-free
};

struct RatioSeries {
  std::string kind;  ///< "lp" (r = 0), "negative" (r = k), "negative_box", "measure"
  double p = 2.0;    ///< exponent of the numerator norm
  int r = 0;
  std::vector<double> ratios;  ///< per sample; NaN for kernel hits
  double max = 0.0;
  double median = 0.0;
  /// (max over all samples - max over the first half) / max over all
  double running_max_change = 0.0;
  int kernel_hits = 0;
  bool gated = true;  ///< false for diagnostics that no acceptance threshold applies to
};

struct ConstantReport {
  int size = 0;
  std::vector<RatioSeries> series;
  double kernel_residual_max = 0.0;  ///< largest interior residual relative to |A u|_{L2(mask)}
  std::vector<std::string> warnings;
};

/// Exponent used by the measure-data ratio: midpoint of (1, n/(n-1)).
double measure_exponent(int n);

/// Ratios over a seeded band-limited ensemble. Samples are independent and run in
/// parallel; results do not depend on the thread count.
ConstantReport empirical_constant(const OperatorSpec& a, const BoxGrid& grid, const DomainMask& mask,
                                  const ConstantOptions& opt, const EnsembleConfig& ens);
/// Same with the weak Korn projection of an annihilator pair in place of T.
ConstantReport empirical_constant(const AnnihilatorPair& pair, const BoxGrid& grid, const DomainMask& mask,
                                  const ConstantOptions& opt, const EnsembleConfig& ens);

/// |fine - coarse| / max(|fine|, |coarse|); 0 if both are zero.
double relative_drift(double coarse, double fine);

}  // namespace korn

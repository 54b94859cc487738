#include "korn/classify.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <random>

#include "korn/error.hpp"

namespace korn {
namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller on the raw engine output keeps the stream identical across standard libraries.
double gaussian(std::mt19937_64& rng) {
  double u1 = unit_uniform(rng);
  double u2 = unit_uniform(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double radical_inverse(int base, std::uint64_t i) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Eigen::VectorXd quasi_point(int n, int i, int count) {
  Eigen::VectorXd x(n);
  const double pi = std::numbers::pi;
  if (n == 1) {
    x(0) = (i % 2 == 0) ? 1.0 : -1.0;
  } else if (n == 2) {
    double t = 2.0 * pi * (i + 0.5) / count;
    x << std::cos(t), std::sin(t);
  } else if (n == 3) {
    // Fibonacci lattice
    double z = 1.0 - (2.0 * i + 1.0) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = i * pi * (3.0 - std::sqrt(5.0));
    x << r * std::cos(phi), r * std::sin(phi), z;
  } else {
    // Halton pairs pushed through Box-Muller, then normalised
    int pairs = (n + 1) / 2;
    if (2 * pairs > static_cast<int>(std::size(kPrimes)))
      throw DimensionError("sphere_samples: dimension too large");
    for (int p = 0; p < pairs; ++p) {
      double u1 = radical_inverse(kPrimes[2 * p], i + 1);
      double u2 = radical_inverse(kPrimes[2 * p + 1], i + 1);
      double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      x(2 * p) = rad * std::cos(2.0 * pi * u2);
      if (2 * p + 1 < n) x(2 * p + 1) = rad * std::sin(2.0 * pi * u2);
    }
  }
  double nrm = x.norm();
  if (nrm == 0.0) x.setUnit(0);
  else x /= nrm;
  return x;
}

struct SymbolSvd {
  Eigen::MatrixXd image;  // orthonormal basis of im A(xi)
  int rank = 0;
  double injective_sigma = 0.0;
};

SymbolSvd analyse(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  SymbolSvd out;
  double cut = rank_cutoff(s(0), rel_tol, floor);
  while (out.rank < s.size() && s(out.rank) > cut) ++out.rank;
  out.image = svd.matrixU().leftCols(out.rank);
  if (m.cols() <= m.rows()) out.injective_sigma = s(m.cols() - 1);
  return out;
}

// Orthonormal basis for span(basis) + span(extra).
Eigen::MatrixXd extend_basis(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& extra) {
  if (extra.cols() == 0) return basis;
  Eigen::MatrixXd r = extra;
  if (basis.cols() > 0) r -= basis * (basis.transpose() * extra);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int add = 0;
  // extra has orthonormal columns, so s measures the sine of the angle to span(basis)
  while (add < s.size() && s(add) > 1e-8) ++add;
  if (add == 0) return basis;
  Eigen::MatrixXd out(basis.rows(), basis.cols() + add);
  out << basis, svd.matrixU().leftCols(add);
  return out;
}

// Orthonormal basis for span(basis) intersected with span(image).
Eigen::MatrixXd intersect(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& image) {
  if (basis.cols() == 0 || image.cols() == 0) return Eigen::MatrixXd(basis.rows(), 0);
  Eigen::MatrixXd c = basis.transpose() * image;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int keep = 0;
  while (keep < s.size() && s(keep) > 1.0 - 1e-10) ++keep;
  Eigen::MatrixXd out = basis * svd.matrixU().leftCols(keep);
  // re-orthonormalise to stop drift over many intersections
  if (keep > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(out);
    out = qr.householderQ() * Eigen::MatrixXd::Identity(out.rows(), keep);
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> sphere_samples(int n, const SamplingConfig& config) {
  if (n < 1) throw DimensionError("sphere_samples: n must be >= 1");
  std::vector<Eigen::VectorXd> out;
  out.reserve(config.quasi_uniform + config.random);
  for (int i = 0; i < config.quasi_uniform; ++i) out.push_back(quasi_point(n, i, config.quasi_uniform));
  std::mt19937_64 rng(config.seed);
  for (int i = 0; i < config.random; ++i) {
    Eigen::VectorXd x(n);
    double nrm = 0.0;
    while (nrm < 1e-12) {
      for (int j = 0; j < n; ++j) x(j) = gaussian(rng);
      nrm = x.norm();
    }
    out.push_back(x / nrm);
  }
  return out;
}

Classification classify(const OperatorSpec& a, const SamplingConfig& config) {
  if (a.is_zero()) throw PreconditionError("classify: zero operator has no meaningful classification");
  auto xs = sphere_samples(a.n(), config);
  if (xs.empty()) throw ConfigError("classify: no sphere samples configured");

  Classification c;
  c.n = a.n();
  c.dim_v = a.dim_v();
  c.dim_w = a.dim_w();
  c.order = a.order();
  c.samples = static_cast<int>(xs.size());
  c.seed = config.seed;
  c.tolerance = config.rank_tol;
  const double floor = config.rank_tol * a.scale();

  c.rank_min = std::numeric_limits<int>::max();
  c.rank_max = 0;
  c.min_singular_on_sphere = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd range(a.dim_w(), 0);
  Eigen::MatrixXd cancel;
  Eigen::MatrixXd p0;
  bool cancel_done = false;
  int stable = 0;

  for (std::size_t s = 0; s < xs.size(); ++s) {
    Eigen::MatrixXd m = a.eval(xs[s]);
    SymbolSvd sv = analyse(m, config.rank_tol, floor);
    c.rank_min = std::min(c.rank_min, sv.rank);
    c.rank_max = std::max(c.rank_max, sv.rank);
    c.min_singular_on_sphere = std::min(c.min_singular_on_sphere, sv.injective_sigma);
    range = extend_basis(range, sv.image);

    Eigen::MatrixXd proj = sv.image * sv.image.transpose();
    if (s == 0) {
      p0 = proj;
      cancel = sv.image;
    } else {
      double var = (proj - p0).norm() == 0.0
                       ? 0.0
                       : Eigen::JacobiSVD<Eigen::MatrixXd>(proj - p0).singularValues()(0);
      c.projector_variation = std::max(c.projector_variation, var);
      if (!cancel_done) {
        Eigen::Index before = cancel.cols();
        cancel = intersect(cancel, sv.image);
        stable = (cancel.cols() == before) ? stable + 1 : 0;
        if (cancel.cols() == 0 || stable >= config.stable_window) cancel_done = true;
      }
    }
  }

  c.essential_range = range;
  c.essential_range_dim = static_cast<int>(range.cols());
  c.cancellation_dim = static_cast<int>(cancel.cols());
  c.is_constant_rank = c.rank_min == c.rank_max;
  c.is_elliptic = c.rank_min == a.dim_v();
  c.is_elliptic_system = c.is_elliptic && a.dim_v() == a.dim_w();
  c.is_maximal_rank = c.is_constant_rank && c.projector_variation <= config.projector_tol;
  c.is_canceling = c.cancellation_dim == 0;
  return c;
}

AnnihilatorReport verify_annihilator(const AnnihilatorPair& pair, const SamplingConfig& config) {
  const OperatorSpec& a = pair.a;
  const OperatorSpec& q = pair.q;
  AnnihilatorReport r;
  if (a.n() != q.n() || q.dim_v() != a.dim_w()) {
    r.message = "shape mismatch: Q must act on the codomain of A";
    return r;
  }
  if (a.is_zero() || q.is_zero()) {
    r.message = "zero operator in pair";
    return r;
  }
  auto xs = sphere_samples(a.n(), config);
  int ra_min = a.dim_w(), ra_max = 0, rq_min = q.dim_w(), rq_max = 0;
  const double fa = config.rank_tol * a.scale();
  const double fq = config.rank_tol * q.scale();
  for (auto& xi : xs) {
    Eigen::MatrixXd am = a.eval(xi);
    Eigen::MatrixXd qm = q.eval(xi);
    double denom = std::max(am.norm() * qm.norm(), 1e-300);
    r.max_composition = std::max(r.max_composition, (qm * am).norm() / denom);
    int ra = numerical_rank(am, config.rank_tol, fa);
    int rq = numerical_rank(qm, config.rank_tol, fq);
    ra_min = std::min(ra_min, ra);
    ra_max = std::max(ra_max, ra);
    rq_min = std::min(rq_min, rq);
    rq_max = std::max(rq_max, rq);
  }
  r.rank_a = ra_max;
  r.rank_q = rq_max;
  r.ranks_constant = ra_min == ra_max && rq_min == rq_max;
  bool exact = r.ranks_constant && ra_max + rq_max == a.dim_w();
  bool composes = r.max_composition <= 1e-10;
  r.ok = composes && exact;
  if (!composes)
    r.message = "Q(xi) A(xi) != 0 (max relative " + std::to_string(r.max_composition) + ")";
  else if (!r.ranks_constant)
    r.message = "ranks vary over the sphere";
  else if (!exact)
    r.message = "rank A + rank Q = " + std::to_string(ra_max + rq_max) + " != dim W = " +
                std::to_string(a.dim_w()) + " (im A(xi) is strictly smaller than ker Q(xi))";
  else
    r.message = "ok";
  return r;
}

OperatorSpec delta_w(const AnnihilatorPair& pair) {
  const OperatorSpec& a = pair.a;
  const OperatorSpec& q = pair.q;
  if (q.dim_v() != a.dim_w()) throw DimensionError("delta_w: Q must act on the codomain of A");
  OperatorSpec aat = compose(a, symbol_transpose(a));
  OperatorSpec qtq = compose(symbol_transpose(q), q);
  OperatorSpec out = add(power(aat, q.order()), power(qtq, a.order()));
  out.set_name(pair.name.empty() ? "delta_w" : "delta_w:" + pair.name);
  return out;
}

}  // namespace korn

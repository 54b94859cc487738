#include "korn/grid.hpp"

#include <memory>

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <tuple>

#include "korn/error.hpp"

namespace korn {

void* aligned_alloc_bytes(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void aligned_free_bytes(void* p) noexcept { fftw_free(p); }

BoxGrid::BoxGrid(int n, int size, double length, int pad)
    : n_(n), size_(size), length_(length), pad_(pad) {
  if (n < 1 || n > 4) throw DimensionError("grid: dimension must be in [1,4]");
  if (size < 4 || (size & (size - 1)) != 0) throw DimensionError("grid: size must be a power of two >= 4");
  if (!(length > 0.0)) throw DimensionError("grid: box length must be positive");
  if (pad < 2 || size % (2 * pad) != 0)
    throw DimensionError("grid: pad factor must be >= 2 and size/pad must be even");
  points_ = 1;
  for (int i = 0; i < n; ++i) points_ *= static_cast<std::size_t>(size);
}

double BoxGrid::cell_volume() const { return std::pow(spacing(), n_); }

void BoxGrid::unravel(std::size_t idx, int* out) const {
  for (int d = n_ - 1; d >= 0; --d) {
    out[d] = static_cast<int>(idx % size_);
    idx /= size_;
  }
}

std::size_t BoxGrid::ravel(const int* j) const {
  std::size_t idx = 0;
  for (int d = 0; d < n_; ++d) idx = idx * size_ + static_cast<std::size_t>(j[d]);
  return idx;
}

bool BoxGrid::in_unpadded(std::size_t idx) const {
  int lo = unpadded_begin(), hi = unpadded_end();
  for (int d = 0; d < n_; ++d) {
    int j = static_cast<int>(idx % size_);
    idx /= size_;
    if (j < lo || j >= hi) return false;
  }
  return true;
}

GridField::GridField(const BoxGrid& grid, int dim, bool real)
    : grid_(grid), dim_(dim), real_(real), data_(grid.num_points() * static_cast<std::size_t>(dim)) {
  if (dim < 1) throw DimensionError("field: dim must be >= 1");
}

double GridField::max_imag() const {
  double m = 0.0;
  for (auto& v : data_) m = std::max(m, std::abs(v.imag()));
  return m;
}

void GridField::make_real() {
  for (auto& v : data_) v = cplx(v.real(), 0.0);
  real_ = true;
}

GridField& GridField::operator+=(const GridField& o) {
  if (!(grid_ == o.grid_) || dim_ != o.dim_) throw DimensionError("field +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  real_ = real_ && o.real_;
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  if (!(grid_ == o.grid_) || dim_ != o.dim_) throw DimensionError("field -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  real_ = real_ && o.real_;
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

namespace {

// Plans are created once per (n, size, sign) with FFTW_ESTIMATE, which is deterministic,
// and executed through the new-array interface, which is thread safe.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(const BoxGrid& g, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(g.n(), g.size(), sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<int> dims(g.n(), g.size());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g.num_points()));
    fftw_plan p = fftw_plan_dft(g.n(), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    if (!p) throw Error("fftw: plan creation failed");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_forward(const BoxGrid& grid, const cplx* in, cplx* out) {
  fftw_plan p = plan_cache().get(grid, FFTW_FORWARD);
  if (in != out) std::copy(in, in + grid.num_points(), out);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out), reinterpret_cast<fftw_complex*>(out));
}

void fft_inverse(const BoxGrid& grid, const cplx* in, cplx* out) {
  fftw_plan p = plan_cache().get(grid, FFTW_BACKWARD);
  if (in != out) std::copy(in, in + grid.num_points(), out);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out), reinterpret_cast<fftw_complex*>(out));
  double s = 1.0 / static_cast<double>(grid.num_points());
  for (std::size_t i = 0; i < grid.num_points(); ++i) out[i] *= s;
}

const std::vector<std::size_t>& mirror_indices(const BoxGrid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<std::size_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.n(), g.size());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto t = std::make_shared<std::vector<std::size_t>>(g.num_points());
  std::vector<int> j(g.n());
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    g.unravel(i, j.data());
    for (int& x : j) x = (g.size() - x) % g.size();
    (*t)[i] = g.ravel(j.data());
  }
  cache.emplace(key, t);
  return *t;
}

// Real components are transformed two at a time as u_a + i u_b.
GridField to_spectrum(const GridField& f) {
  const BoxGrid& g = f.grid();
  GridField s(g, f.dim(), false);
  int c = 0;
  if (f.is_real() && f.dim() >= 2) {
    const auto& mir = mirror_indices(g);
    const std::size_t np = g.num_points();
    cvec z(np), zs(np);
    for (; c + 1 < f.dim(); c += 2) {
      auto a = f.component(c), b = f.component(c + 1);
      for (std::size_t i = 0; i < np; ++i) z[i] = cplx(a[i].real(), b[i].real());
      fft_forward(g, z.data(), zs.data());
      auto sa = s.component(c), sb = s.component(c + 1);
      for (std::size_t i = 0; i < np; ++i) {
        cplx p = zs[i], q = std::conj(zs[mir[i]]);
        sa[i] = 0.5 * (p + q);
        sb[i] = cplx(0.0, -0.5) * (p - q);
      }
    }
  }
  for (; c < f.dim(); ++c) fft_forward(g, f.component(c).data(), s.component(c).data());
  return s;
}

// For real output the spectra are assumed conjugate symmetric; two components then share
// one inverse transform and any asymmetric part is discarded.
GridField from_spectrum(const GridField& s, bool real) {
  const BoxGrid& g = s.grid();
  GridField f(g, s.dim(), false);
  int c = 0;
  if (real && s.dim() >= 2) {
    const std::size_t np = g.num_points();
    cvec z(np), zo(np);
    for (; c + 1 < s.dim(); c += 2) {
      auto sa = s.component(c), sb = s.component(c + 1);
      for (std::size_t i = 0; i < np; ++i) z[i] = sa[i] + cplx(0.0, 1.0) * sb[i];
      fft_inverse(g, z.data(), zo.data());
      auto fa = f.component(c), fb = f.component(c + 1);
      for (std::size_t i = 0; i < np; ++i) {
        fa[i] = zo[i].real();
        fb[i] = zo[i].imag();
      }
    }
  }
  for (; c < s.dim(); ++c) fft_inverse(g, s.component(c).data(), f.component(c).data());
  if (real) f.make_real();
  return f;
}

}  // namespace korn

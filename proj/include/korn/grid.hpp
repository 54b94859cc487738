#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace korn {

using cplx = std::complex<double>;

/// Allocator returning SIMD-aligned storage so FFT plans can be reused across buffers.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free_bytes(void* p) noexcept;

template <class T>
T* AlignedAllocator<T>::allocate(std::size_t n) {
  return static_cast<T*>(aligned_alloc_bytes(n * sizeof(T)));
}
template <class T>
void AlignedAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  aligned_free_bytes(p);
}

using cvec = std::vector<cplx, AlignedAllocator<cplx>>;

/// Uniform periodic box [0, L)^n with `size` points per axis at x_j = j h, h = L/size.
/// The unpadded region is the central 1/pad fraction per axis; domains live there.
class BoxGrid {
 public:
  BoxGrid() = default;
  BoxGrid(int n, int size, double length = 1.0, int pad = 2);

  int n() const { return n_; }
  int size() const { return size_; }
  double length() const { return length_; }
  int pad() const { return pad_; }
  double spacing() const { return length_ / size_; }
  double cell_volume() const;
  std::size_t num_points() const { return points_; }

  void unravel(std::size_t idx, int* out) const;
  std::size_t ravel(const int* j) const;
  /// signed frequency of FFT index j: j for j < size/2, j - size otherwise
  int frequency(int j) const { return j < size_ / 2 ? j : j - size_; }

  int unpadded_begin() const { return (size_ - size_ / pad_) / 2; }
  int unpadded_end() const { return unpadded_begin() + size_ / pad_; }
  bool in_unpadded(std::size_t idx) const;

  bool operator==(const BoxGrid& o) const {
    return n_ == o.n_ && size_ == o.size_ && length_ == o.length_ && pad_ == o.pad_;
  }

 private:
  int n_ = 0;
  int size_ = 0;
  double length_ = 1.0;
  int pad_ = 2;
  std::size_t points_ = 0;
};

/// Samples of a dim-vector field on a BoxGrid, stored component-major.
class GridField {
 public:
  GridField() = default;
  GridField(const BoxGrid& grid, int dim, bool real = true);

  const BoxGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  bool is_real() const { return real_; }
  void set_real(bool r) { real_ = r; }

  std::span<cplx> component(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * grid_.num_points(), grid_.num_points()};
  }
  std::span<const cplx> component(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * grid_.num_points(), grid_.num_points()};
  }
  cplx& at(std::size_t idx, int c) { return data_[static_cast<std::size_t>(c) * grid_.num_points() + idx]; }
  cplx at(std::size_t idx, int c) const {
    return data_[static_cast<std::size_t>(c) * grid_.num_points() + idx];
  }
  cvec& data() { return data_; }
  const cvec& data() const { return data_; }

  /// Largest |imaginary part| over all samples.
  double max_imag() const;
  /// Zero imaginary parts and mark real.
  void make_real();

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);

 private:
  BoxGrid grid_;
  int dim_ = 0;
  bool real_ = true;
  cvec data_;
};

/// Unnormalised forward DFT (sign -1) of one component.
void fft_forward(const BoxGrid& grid, const cplx* in, cplx* out);
/// Inverse DFT including the 1/N^n normalisation.
void fft_inverse(const BoxGrid& grid, const cplx* in, cplx* out);

/// Index of -m for every lattice index m.
const std::vector<std::size_t>& mirror_indices(const BoxGrid& grid);
/// Component-wise transforms of a whole field (spectrum layout matches the field).
GridField to_spectrum(const GridField& f);
GridField from_spectrum(const GridField& s, bool real);

}  // namespace korn

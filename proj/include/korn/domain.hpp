#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "korn/grid.hpp"
#include "korn/spec_io.hpp"

namespace korn {

/// Raw occupancy image used for irregular domains: one byte per cell, nonzero = inside,
/// row-major with the last axis fastest.
struct Bitmap {
  int n = 0;
  std::vector<int> sizes;
  std::vector<std::uint8_t> cells;
};

/// Boolean occupancy of the grid points of a BoxGrid. Always nonempty and inside the
/// unpadded region.
class DomainMask {
 public:
  DomainMask(const BoxGrid& grid, std::vector<std::uint8_t> cells, Json shape = Json());

  const BoxGrid& grid() const { return grid_; }
  bool contains(std::size_t idx) const { return cells_[idx] != 0; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  /// Mask cells in increasing index order.
  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t count() const { return indices_.size(); }
  double volume() const { return static_cast<double>(count()) * grid_.cell_volume(); }
  /// Mean position of the mask cells, in box coordinates.
  const Eigen::VectorXd& centroid() const { return centroid_; }
  /// Number of face-connected components.
  int components() const { return components_; }
  const Json& shape() const { return shape_; }

  /// Cells whose whole cube of Chebyshev radius `r` lies in the mask.
  const std::vector<std::size_t>& interior(int r) const;

 private:
  BoxGrid grid_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::size_t> indices_;
  Eigen::VectorXd centroid_;
  int components_ = 0;
  Json shape_;
  struct InteriorCache {
    std::mutex mu;
    std::map<int, std::shared_ptr<const std::vector<std::size_t>>> sets;
  };
  std::shared_ptr<InteriorCache> cache_ = std::make_shared<InteriorCache>();
};

/// Rasterise a shape expression. Coordinates are fractions of the box length L.
///   {"ball": {"center": [..], "radius": r}}
///   {"box": {"lo": [..], "hi": [..]}}
///   {"halfspace": {"normal": [..], "offset": c}}            n.x <= c
///   {"bitmap": {"file": path, "lo": [..], "hi": [..]}}      image stretched over [lo, hi]
///   {"union": [..]}, {"intersection": [..]}, {"difference": [a, b]}, {"complement": s}
/// Relative bitmap paths resolve against `base_dir`. Throws ConfigError for malformed
/// expressions, empty masks and masks reaching into the padding.
DomainMask make_domain(const BoxGrid& grid, const Json& shape, const std::string& base_dir = "");

/// Named test domains in dimension n: "disk", "square", "two_ball", "blob".
Json standard_shape(const std::string& family, int n);

/// Deterministic irregular star-shaped blob image of side `size` (n = 2 or 3).
Bitmap blob_bitmap(int n, int size);

}  // namespace korn

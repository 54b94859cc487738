#include "korn/domain.hpp"

#include <cmath>
#include <deque>
#include <filesystem>
#include <functional>
#include <numbers>

#include "korn/error.hpp"
#include "korn/field_io.hpp"

namespace korn {

DomainMask::DomainMask(const BoxGrid& grid, std::vector<std::uint8_t> cells, Json shape)
    : grid_(grid), cells_(std::move(cells)), shape_(std::move(shape)) {
  if (cells_.size() != grid_.num_points()) throw DimensionError("mask: cell count does not match grid");
  const int n = grid_.n();
  centroid_ = Eigen::VectorXd::Zero(n);
  std::vector<int> j(n);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (!cells_[i]) continue;
    cells_[i] = 1;
    if (!grid_.in_unpadded(i)) throw ConfigError("mask touches the padding region");
    indices_.push_back(i);
    grid_.unravel(i, j.data());
    for (int d = 0; d < n; ++d) centroid_(d) += j[d] * grid_.spacing();
  }
  if (indices_.empty()) throw ConfigError("mask is empty");
  centroid_ /= static_cast<double>(indices_.size());

  // face-connected components by breadth-first fill
  std::vector<std::uint8_t> seen(cells_.size(), 0);
  std::vector<int> k(n);
  for (std::size_t start : indices_) {
    if (seen[start]) continue;
    ++components_;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      grid_.unravel(cur, k.data());
      for (int d = 0; d < n; ++d)
        for (int s : {-1, 1}) {
          int keep = k[d];
          k[d] = (k[d] + s + grid_.size()) % grid_.size();
          std::size_t nb = grid_.ravel(k.data());
          k[d] = keep;
          if (cells_[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
    }
  }
}

const std::vector<std::size_t>& DomainMask::interior(int r) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->sets.find(r);
  if (it != cache_->sets.end()) return *it->second;
  // separable min filter: the cube erosion is a sequence of 1-D erosions
  std::vector<std::uint8_t> cur = cells_, next(cells_.size());
  const int n = grid_.n(), size = grid_.size();
  std::vector<int> j(n);
  for (int d = 0; d < n && r > 0; ++d) {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!cur[i]) {
        next[i] = 0;
        continue;
      }
      grid_.unravel(i, j.data());
      int keep = j[d];
      std::uint8_t ok = 1;
      for (int o = -r; o <= r && ok; ++o) {
        j[d] = (keep + o + size) % size;
        ok = cur[grid_.ravel(j.data())];
      }
      next[i] = ok;
    }
    std::swap(cur, next);
  }
  auto out = std::make_shared<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < cur.size(); ++i)
    if (cur[i]) out->push_back(i);
  cache_->sets[r] = out;
  return *out;
}

namespace {

using Pred = std::function<bool(const Eigen::VectorXd&)>;

Eigen::VectorXd vec_field(const Json& j, const char* key, int n, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array() || static_cast<int>(j[key].size()) != n)
    throw ConfigError(where + ": '" + key + "' must be an array of " + std::to_string(n) + " numbers");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[key][i].is_number()) throw ConfigError(where + ": '" + key + "' must hold numbers");
    v(i) = j[key][i].get<double>();
  }
  return v;
}

double num_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(where + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

Pred bitmap_pred(Bitmap bm, Eigen::VectorXd lo, Eigen::VectorXd hi, const std::string& where) {
  const int n = static_cast<int>(lo.size());
  if (bm.n != n) throw ConfigError(where + ": bitmap dimension does not match grid");
  for (int d = 0; d < n; ++d)
    if (!(hi(d) > lo(d))) throw ConfigError(where + ": need hi > lo");
  auto shared = std::make_shared<Bitmap>(std::move(bm));
  return [shared, lo, hi, n](const Eigen::VectorXd& x) {
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) {
      double u = (x(d) - lo(d)) / (hi(d) - lo(d));
      if (u < 0.0 || u >= 1.0) return false;
      int s = shared->sizes[d];
      int c = std::min(static_cast<int>(u * s), s - 1);
      idx = idx * s + c;
    }
    return shared->cells[idx] != 0;
  };
}

Pred compile(const Json& j, int n, const std::string& base, const std::string& where) {
  if (!j.is_object() || j.size() != 1)
    throw ConfigError(where + ": shape must be an object with exactly one key");
  const std::string kind = j.begin().key();
  const Json& a = j.begin().value();
  const std::string w = where + "." + kind;
  if (kind == "ball") {
    Eigen::VectorXd c = vec_field(a, "center", n, w);
    double r = num_field(a, "radius", w);
    if (!(r > 0)) throw ConfigError(w + ": radius must be positive");
    return [c, r](const Eigen::VectorXd& x) { return (x - c).squaredNorm() <= r * r; };
  }
  if (kind == "box") {
    Eigen::VectorXd lo = vec_field(a, "lo", n, w), hi = vec_field(a, "hi", n, w);
    return [lo, hi](const Eigen::VectorXd& x) {
      return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    };
  }
  if (kind == "halfspace") {
    Eigen::VectorXd nv = vec_field(a, "normal", n, w);
    double off = num_field(a, "offset", w);
    return [nv, off](const Eigen::VectorXd& x) { return nv.dot(x) <= off; };
  }
  if (kind == "bitmap") {
    Eigen::VectorXd lo = vec_field(a, "lo", n, w), hi = vec_field(a, "hi", n, w);
    Bitmap bm;
    if (a.contains("file")) {
      std::filesystem::path p = a["file"].get<std::string>();
      if (p.is_relative() && !base.empty()) p = std::filesystem::path(base) / p;
      bm = read_bitmap(p.string());
    } else if (a.contains("generate") && a["generate"] == "blob") {
      bm = blob_bitmap(n, a.value("size", 64));
    } else {
      throw ConfigError(w + ": needs 'file' or 'generate': \"blob\"");
    }
    return bitmap_pred(std::move(bm), lo, hi, w);
  }
  if (kind == "union" || kind == "intersection") {
    if (!a.is_array() || a.empty()) throw ConfigError(w + ": expects a nonempty array");
    std::vector<Pred> parts;
    for (std::size_t i = 0; i < a.size(); ++i)
      parts.push_back(compile(a[i], n, base, w + "[" + std::to_string(i) + "]"));
    bool any = kind == "union";
    return [parts, any](const Eigen::VectorXd& x) {
      for (auto& p : parts)
        if (p(x) == any) return any;
      return !any;
    };
  }
  if (kind == "difference") {
    if (!a.is_array() || a.size() != 2) throw ConfigError(w + ": expects [a, b]");
    Pred p = compile(a[0], n, base, w + "[0]"), q = compile(a[1], n, base, w + "[1]");
    return [p, q](const Eigen::VectorXd& x) { return p(x) && !q(x); };
  }
  if (kind == "complement") {
    Pred p = compile(a, n, base, w);
    return [p](const Eigen::VectorXd& x) { return !p(x); };
  }
  throw ConfigError(w + ": unknown shape kind '" + kind + "'");
}

}  // namespace

DomainMask make_domain(const BoxGrid& grid, const Json& shape, const std::string& base_dir) {
  Pred p = compile(shape, grid.n(), base_dir, "shape");
  std::vector<std::uint8_t> cells(grid.num_points(), 0);
  std::vector<int> j(grid.n());
  Eigen::VectorXd x(grid.n());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    grid.unravel(i, j.data());
    for (int d = 0; d < grid.n(); ++d) x(d) = static_cast<double>(j[d]) / grid.size();
    cells[i] = p(x) ? 1 : 0;
  }
  return DomainMask(grid, std::move(cells), shape);
}

Json standard_shape(const std::string& family, int n) {
  auto filled = [n](double v) { return std::vector<double>(n, v); };
  if (family == "disk") return {{"ball", {{"center", filled(0.5)}, {"radius", 0.2}}}};
  if (family == "square") return {{"box", {{"lo", filled(0.32)}, {"hi", filled(0.68)}}}};
  if (family == "two_ball") {
    auto c1 = filled(0.5), c2 = filled(0.5);
    c1[0] = 0.38;
    c2[0] = 0.63;
    return {{"union", Json::array({Json{{"ball", {{"center", c1}, {"radius", 0.1}}}},
                                   Json{{"ball", {{"center", c2}, {"radius", 0.1}}}}})}};
  }
  if (family == "blob")
    return {{"bitmap", {{"generate", "blob"}, {"size", 64}, {"lo", filled(0.28)}, {"hi", filled(0.72)}}}};
  throw ConfigError("unknown domain family '" + family + "' (disk | square | two_ball | blob)");
}

Bitmap blob_bitmap(int n, int size) {
  if (n < 2 || n > 3) throw ConfigError("blob bitmap: n must be 2 or 3");
  if (size < 4) throw ConfigError("blob bitmap: size must be >= 4");
  Bitmap bm;
  bm.n = n;
  bm.sizes.assign(n, size);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= size;
  bm.cells.assign(total, 0);
  std::vector<int> j(n);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (int d = n - 1; d >= 0; --d) {
      j[d] = static_cast<int>(r % size);
      r /= size;
    }
    double x = (j[0] + 0.5) / size - 0.5, y = (j[1] + 0.5) / size - 0.5;
    double z = n == 3 ? (j[2] + 0.5) / size - 0.5 : 0.0;
    double rho = std::sqrt(x * x + y * y + z * z);
    double th = std::atan2(y, x);
    double bump = 1.0 + 0.18 * std::sin(3.0 * th) + 0.1 * std::cos(5.0 * th + 0.4);
    if (n == 3) bump += 0.12 * z / std::max(rho, 1e-12);
    bm.cells[i] = rho <= 0.36 * bump ? 1 : 0;
  }
  return bm;
}

}  // namespace korn

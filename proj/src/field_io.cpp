#include "korn/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "korn/error.hpp"

namespace korn {
namespace {

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ConfigError("cannot write '" + path + "'");
  }
  void magic(const char* m) { out_.write(m, 4); }
  void u32(std::uint32_t v) { raw(to_le(v)); }
  void f64(double v) { raw(to_le(v)); }
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw Error("write failed for '" + path_ + "'");
  }

 private:
  template <class T>
  void raw(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw ConfigError("cannot open '" + path + "'");
  }
  void magic(const char* m) {
    char b[4];
    read(b, 4);
    if (std::memcmp(b, m, 4) != 0)
      throw ConfigError(path_ + ": bad magic, expected " + std::string(m, 4));
  }
  std::uint32_t u32() { return to_le(raw<std::uint32_t>()); }
  double f64() { return to_le(raw<double>()); }
  std::uint8_t u8() { return raw<std::uint8_t>(); }
  void read(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw ConfigError(path_ + ": truncated file");
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw ConfigError(path_ + ": trailing bytes");
  }
  const std::string& path() const { return path_; }

 private:
  template <class T>
  T raw() {
    T v;
    read(&v, sizeof(T));
    return v;
  }
  std::ifstream in_;
  std::string path_;
};

// n and the common edge length; the formats allow anisotropic sizes but grids do not.
std::pair<int, int> read_shape(Reader& r) {
  std::uint32_t n = r.u32();
  if (n < 1 || n > 4) throw ConfigError(r.path() + ": dimension " + std::to_string(n) + " out of range");
  int size = -1;
  for (std::uint32_t d = 0; d < n; ++d) {
    int s = static_cast<int>(r.u32());
    if (size >= 0 && s != size) throw ConfigError(r.path() + ": anisotropic grids are not supported");
    size = s;
  }
  return {static_cast<int>(n), size};
}

}  // namespace

void write_field(const std::string& path, const GridField& f) {
  const BoxGrid& g = f.grid();
  Writer w(path);
  w.magic("KGF1");
  w.u32(static_cast<std::uint32_t>(g.n()));
  for (int d = 0; d < g.n(); ++d) w.u32(static_cast<std::uint32_t>(g.size()));
  w.f64(g.length());
  w.u32(static_cast<std::uint32_t>(f.dim()));
  bool cplx_data = !f.is_real();
  w.u8(cplx_data ? 1 : 0);
  for (std::size_t i = 0; i < g.num_points(); ++i)
    for (int c = 0; c < f.dim(); ++c) {
      w.f64(f.at(i, c).real());
      if (cplx_data) w.f64(f.at(i, c).imag());
    }
  w.finish();
}

GridField read_field(const std::string& path, int pad) {
  Reader r(path);
  r.magic("KGF1");
  auto [n, size] = read_shape(r);
  double len = r.f64();
  int dim = static_cast<int>(r.u32());
  std::uint8_t is_complex = r.u8();
  if (is_complex > 1) throw ConfigError(path + ": bad complex flag");
  BoxGrid g;
  try {
    g = BoxGrid(n, size, len, pad);
  } catch (const DimensionError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (dim < 1 || dim > 64) throw ConfigError(path + ": component count out of range");
  GridField f(g, dim, is_complex == 0);
  for (std::size_t i = 0; i < g.num_points(); ++i)
    for (int c = 0; c < dim; ++c) {
      double re = r.f64();
      double im = is_complex ? r.f64() : 0.0;
      f.at(i, c) = cplx(re, im);
    }
  r.expect_end();
  return f;
}

void write_mask(const std::string& path, const DomainMask& m) {
  const BoxGrid& g = m.grid();
  Writer w(path);
  w.magic("KMK1");
  w.u32(static_cast<std::uint32_t>(g.n()));
  for (int d = 0; d < g.n(); ++d) w.u32(static_cast<std::uint32_t>(g.size()));
  std::vector<std::uint8_t> packed((g.num_points() + 7) / 8, 0);
  for (std::size_t i : m.indices()) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  w.bytes(packed.data(), packed.size());
  w.finish();
  Json side = {{"format", "korn-mask/1"}, {"pad", g.pad()}, {"cells", m.count()},
               {"components", m.components()}};
  if (!m.shape().is_null()) side["shape"] = m.shape();
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

DomainMask read_mask(const std::string& path, const BoxGrid& grid) {
  Reader r(path);
  r.magic("KMK1");
  auto [n, size] = read_shape(r);
  if (n != grid.n() || size != grid.size())
    throw ConfigError(path + ": mask grid " + std::to_string(size) + "^" + std::to_string(n) +
                      " does not match " + std::to_string(grid.size()) + "^" + std::to_string(grid.n()));
  std::vector<std::uint8_t> packed((grid.num_points() + 7) / 8);
  r.read(packed.data(), packed.size());
  r.expect_end();
  std::vector<std::uint8_t> cells(grid.num_points());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = (packed[i / 8] >> (i % 8)) & 1u;
  Json shape;
  std::ifstream side(path + ".json");
  if (side) {
    std::string text((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
    Json j = parse_json_text(text, path + ".json");
    if (j.contains("shape")) shape = j["shape"];
  }
  return DomainMask(grid, std::move(cells), shape);
}

void write_bitmap(const std::string& path, const Bitmap& b) {
  Writer w(path);
  w.magic("KBM1");
  w.u32(static_cast<std::uint32_t>(b.n));
  for (int s : b.sizes) w.u32(static_cast<std::uint32_t>(s));
  w.bytes(b.cells.data(), b.cells.size());
  w.finish();
}

Bitmap read_bitmap(const std::string& path) {
  Reader r(path);
  r.magic("KBM1");
  Bitmap b;
  b.n = static_cast<int>(r.u32());
  if (b.n < 1 || b.n > 4) throw ConfigError(path + ": dimension out of range");
  std::size_t total = 1;
  for (int d = 0; d < b.n; ++d) {
    int s = static_cast<int>(r.u32());
    if (s < 1 || s > 4096) throw ConfigError(path + ": bitmap size out of range");
    b.sizes.push_back(s);
    total *= static_cast<std::size_t>(s);
  }
  b.cells.resize(total);
  r.read(b.cells.data(), total);
  r.expect_end();
  return b;
}

}  // namespace korn

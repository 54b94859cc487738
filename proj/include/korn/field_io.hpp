#pragma once

#include <string>

#include "korn/domain.hpp"
#include "korn/grid.hpp"

namespace korn {

// All formats are little-endian.
//
// Grid field:  "KGF1" u32 n, u32 sizes[n], f64 L, u32 dim, u8 complex,
//              then per grid point (last axis fastest) dim values, each re (+ im).
// Mask:        "KMK1" u32 n, u32 sizes[n], packed bits (LSB first, last axis fastest).
//              A JSON sidecar <file>.json records the shape expression and pad factor.
// Bitmap:      "KBM1" u32 n, u32 sizes[n], one byte per cell.

void write_field(const std::string& path, const GridField& f);
/// The pad factor is not part of the file; the caller supplies it.
GridField read_field(const std::string& path, int pad = 2);

void write_mask(const std::string& path, const DomainMask& m);
DomainMask read_mask(const std::string& path, const BoxGrid& grid);

void write_bitmap(const std::string& path, const Bitmap& b);
Bitmap read_bitmap(const std::string& path);

}  // namespace korn

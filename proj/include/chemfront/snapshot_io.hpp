#pragma once

#include <string>
#include <utility>

#include "chemfront/grid.hpp"

namespace chemfront {

// Binary field dump: fixed 64-byte header
//   bytes  0..7   magic "KSFIELD1"
//   u32            format version (1)
//   u32            dim
//   u32 x 3        points per axis
//   u32            boundary (0 = neumann, 1 = periodic)
//   f64            time
//   f64, f64       lo, hi of axis 0
//   8 bytes        reserved (zero)
// then (dim-1) pairs of f64 lo/hi for the remaining axes, then the samples
// as little-endian 64-bit floats in row-major order (axis 0 slowest).

void write_field(const std::string& path, const Field& f, double time);
std::pair<Field, double> read_field(const std::string& path);

}  // namespace chemfront

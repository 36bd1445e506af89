#pragma once

#include <filesystem>
#include <iosfwd>

#include "bbmlab/field.hpp"

namespace bbm {

// CSV layout: header "x,value" (1D) or "x,y,value" (2D), then one row per
// node in storage order, values printed with 17 significant digits.
void write_field_csv(const Field& f, std::ostream& os);
/// Reconstructs the grid from the node coordinates (x0 = -L/2, uniform spacing).
Field read_field_csv(std::istream& is);

// Binary layout, all little-endian 64-bit:
//   int64 dim | float64 length[dim] | int64 points[dim] | float64 samples[N]
// with samples row-major (x slow).
void write_field_binary(const Field& f, std::ostream& os);
Field read_field_binary(std::istream& is);

void save_field(const Field& f, const std::filesystem::path& path);
/// Chooses the format from the extension: ".csv" is text, anything else binary.
Field load_field(const std::filesystem::path& path);

}  // namespace bbm

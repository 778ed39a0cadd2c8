#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "codesign/grid.hpp"

namespace codesign {

/// Grid text format: a header line `dims... spacing origin...`, then one line per
/// grid row (x fastest, rows in increasing y). 3D fields write one block of rows
/// per z layer, blocks separated by a blank line. Values are printed with full
/// round-trip precision.
void writeFieldText(std::ostream& out, const UniformGrid& grid, const std::vector<double>& values);
void writeFieldText(const std::string& path, const UniformGrid& grid, const std::vector<double>& values);

struct GridValues {
    UniformGrid grid;
    std::vector<double> values;
};

/// Reads an element field written by writeFieldText. The number of values must match the header.
GridValues readFieldText(std::istream& in);
GridValues readFieldText(const std::string& path);

/// 8-bit binary PGM of a 2D element field: 0 maps to black, the field maximum to
/// white, negative values clamp to black. Rows are written top (max y) first.
void writePgm(const std::string& path, const UniformGrid& grid, const std::vector<double>& values);

} // namespace codesign

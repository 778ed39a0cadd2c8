#include "codesign/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace codesign {

void writeFieldText(std::ostream& out, const UniformGrid& grid, const std::vector<double>& values)
{
    if (values.size() != grid.elementCount())
        throw ConfigError("writeFieldText: value count does not match element count");
    out << std::setprecision(17);
    for (int a = 0; a < grid.dim; ++a)
        out << grid.cells[a] << ' ';
    out << grid.spacing;
    for (int a = 0; a < grid.dim; ++a)
        out << ' ' << grid.origin[a];
    out << '\n';

    const int nx = grid.cellsAlong(0);
    const int ny = grid.cellsAlong(1);
    const int nz = grid.cellsAlong(2);
    for (int k = 0; k < nz; ++k) {
        if (k > 0)
            out << '\n';
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                if (i > 0)
                    out << ' ';
                out << values[grid.elementIndex(i, j, k)];
            }
            out << '\n';
        }
    }
}

void writeFieldText(const std::string& path, const UniformGrid& grid, const std::vector<double>& values)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    writeFieldText(out, grid, values);
}

GridValues readFieldText(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        throw ConfigError("field file: missing header");
    std::istringstream hs(header);
    std::vector<double> tokens;
    double t;
    while (hs >> t)
        tokens.push_back(t);

    GridValues out;
    if (tokens.size() == 5) {
        out.grid = UniformGrid::make2d(tokens[3], tokens[4], tokens[2], static_cast<int>(tokens[0]),
                                       static_cast<int>(tokens[1]));
    } else if (tokens.size() == 7) {
        out.grid = UniformGrid::make3d(Point(tokens[4], tokens[5], tokens[6]), tokens[3],
                                       static_cast<int>(tokens[0]), static_cast<int>(tokens[1]),
                                       static_cast<int>(tokens[2]));
    } else {
        throw ConfigError("field file: header must have 5 (2D) or 7 (3D) entries");
    }

    const std::size_t n = out.grid.elementCount();
    std::vector<double> rowMajor;
    rowMajor.reserve(n);
    while (rowMajor.size() < n && in >> t)
        rowMajor.push_back(t);
    if (rowMajor.size() != n)
        throw ConfigError("field file: expected " + std::to_string(n) + " values, found " +
                          std::to_string(rowMajor.size()));
    // File order is already x-fastest, y, then z: identical to element indexing.
    out.values = std::move(rowMajor);
    return out;
}

GridValues readFieldText(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return readFieldText(in);
}

void writePgm(const std::string& path, const UniformGrid& grid, const std::vector<double>& values)
{
    if (grid.dim != 2)
        throw ConfigError("PGM export supports 2D fields only");
    if (values.size() != grid.elementCount())
        throw ConfigError("writePgm: value count does not match element count");
    const int nx = grid.cells[0];
    const int ny = grid.cells[1];
    double vmax = 0.0;
    for (double v : values)
        if (std::isfinite(v))
            vmax = std::max(vmax, v);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << "P5\n" << nx << ' ' << ny << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(nx));
    for (int j = ny - 1; j >= 0; --j) {
        for (int i = 0; i < nx; ++i) {
            const double v = values[grid.elementIndex(i, j)];
            double s = (vmax > 0.0 && std::isfinite(v)) ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
            row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(255.0 * s));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

} // namespace codesign

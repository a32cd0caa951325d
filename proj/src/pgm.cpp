#include "pcgen/pgm.hpp"

#include <fstream>

#include "pcgen/errors.hpp"

namespace pcgen {

void write_pgm(const std::string& path, int rows, int cols, std::span<const uint8_t> pixels) {
    if (pixels.size() != static_cast<size_t>(rows) * cols)
        throw DataError("write_pgm: pixel count does not match dims");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << "P5\n" << cols << ' ' << rows << "\n255\n";
    f.write(reinterpret_cast<const char*>(pixels.data()), static_cast<long>(pixels.size()));
    if (!f) throw DataError("failed while writing: " + path);
}

} // namespace pcgen

#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace pcgen {

// Binary PGM (P5), maxval 255.
void write_pgm(const std::string& path, int rows, int cols, std::span<const uint8_t> pixels);

} // namespace pcgen

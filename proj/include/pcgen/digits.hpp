#pragma once

#include <cstdint>
#include <string>

#include "pcgen/data.hpp"

namespace pcgen {

// Procedurally rendered 28x28 digit glyphs in MNIST layout: stroke skeletons
// per class, randomized affine jitter, stroke width and pixel noise per
// sample. A stand-in corpus for environments without the real MNIST files;
// same IDX containers, same normalization path.
struct DigitRenderOptions {
    double noise_sd = 8.0;     // additive pixel noise, [0,255] units
    double max_rotate = 0.16;  // radians
    double max_shift = 1.6;    // pixels
};

// count images with labels assigned round-robin (i % 10), deterministic per seed
IdxImages render_digit_images(int count, uint64_t seed,
                              const DigitRenderOptions& opts = {});
std::vector<uint8_t> digit_labels(int count);

// writes train/t10k image+label IDX files into dir
void write_digit_dataset(const std::string& dir, int n_train, int n_test, uint64_t seed,
                         const DigitRenderOptions& opts = {});

} // namespace pcgen

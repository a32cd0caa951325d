#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcgen/matrix.hpp"

namespace pcgen {

struct DatasetMeta {
    std::string name;
    int input_dim = 0;
    int n_classes = 0;
    int image_rows = 0; // 0 when the inputs are not images
    int image_cols = 0;
    std::string normalization; // human-readable descriptor
};

// Immutable after construction; shared freely across threads.
struct Dataset {
    std::vector<Vec> inputs;
    std::vector<Vec> targets; // one-hot
    std::vector<int> labels;
    std::vector<Vec> exemplars; // per-class reference vectors (may be empty)
    DatasetMeta meta;

    size_t size() const { return inputs.size(); }
    void validate() const; // throws ConfigError on broken invariants
    Dataset subset(size_t first, size_t count) const;
};

Vec one_hot(int label, int n);

// The paper's synthetic task: n_classes exemplars drawn uniformly from
// [-1,1]^dim, samples = exemplar + Gaussian noise, classes assigned
// round-robin so small datasets stay balanced.
Dataset make_toy_dataset(uint64_t seed, int n_samples, double noise_sd, int n_classes = 3,
                         int dim = 10);

// ---- IDX container (MNIST distribution format) ----
// Big-endian magic and dims, raw unsigned bytes. Readers accept plain files
// or gzip members (detected by the 0x1f 0x8b prefix).

struct IdxImages {
    int count = 0;
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> pixels; // count*rows*cols, row-major per image
};

IdxImages load_idx_images(const std::string& path);
std::vector<uint8_t> load_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const std::vector<uint8_t>& labels);

// pixel byte -> network range [-1, 1] and back (exact round trip)
inline double pixel_to_unit(uint8_t p) { return static_cast<double>(p) / 127.5 - 1.0; }
uint8_t unit_to_pixel(double v);

// Loads an image/label pair, maps pixels to [-1,1], one-hot targets in 10
// classes. Class-mean images are stored as exemplars.
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);

} // namespace pcgen

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcgen/network.hpp"

namespace pcgen {

// Versioned network snapshot: one ASCII header line declaring shapes and
// provenance, then little-endian float64 payloads in a fixed order
// (nu, then M and W per gap row-major, then optional exemplar rows).
// save(load(f)) reproduces f byte for byte.
struct Checkpoint {
    int version = 1;
    std::vector<int> layer_sizes;
    Activation activation = Activation::Linear;
    Vec nu;
    std::vector<Matrix> M;
    std::vector<Matrix> W;
    std::vector<Vec> exemplars; // per-class reference vectors (may be empty)
    std::vector<std::pair<std::string, std::string>> meta; // ordered provenance tags

    std::string meta_value(const std::string& key) const; // "" when absent

    PCNetwork to_network() const;
    static Checkpoint from_network(const PCNetwork& net);
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

} // namespace pcgen

#pragma once

#include <span>

#include "pcgen/network.hpp"

namespace pcgen {

struct DiscriminationResult {
    Vec output; // settled x^(n); the class call is its argmax
    bool converged = false;
    double elapsed = 0.0;
};

struct GenerativeResult {
    Vec sample; // settled x^(1)
    bool converged = false;
    double residual = 0.0; // ||x^(n)_target - mu^(n)|| at the settled state
    double energy = 0.0;   // final free energy
};

struct GenerateOptions {
    // keep the current node state instead of zeroing it (experimentation only;
    // the default avoids priming the network with target-consistent state)
    bool warm_start = false;
};

// Input clamped, output free (alpha=1, beta=1), warm feedforward start.
DiscriminationResult discriminate(PCNetwork& net, std::span<const double> X, ModeConfig cfg);

// Output pinned to the class vector, input free (alpha=0, beta=0). The input
// comparison is gated off, so eps^(1) relaxes to zero; x starts from the zero
// state. With activity decay on a linear network, the settled x^(1)
// approximates the minimum 2-norm solution of M^(1) x = Y.
GenerativeResult generate(PCNetwork& net, std::span<const double> Y, ModeConfig cfg,
                          GenerateOptions opts = {});

} // namespace pcgen

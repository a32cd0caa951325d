#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pcgen/metrics.hpp"
#include "pcgen/network.hpp"

namespace pcgen {

struct Dataset;

// Weight-dynamics constants. One Euler step of the weight ODEs is applied per
// presented sample after the nodes settle. The gradient term is divided by
// the source-layer fan-in (normalize_fan_in), which keeps the per-sample step
// well inside the stable region for any layer width; the decay term is not
// normalized, so lambda_M/gamma stays the per-sample shrink rate from the
// paper-scale constants.
struct LearningConfig {
    double gamma = 0.8;
    double lambda_M = 0.0;
    double lambda_W = 0.0;
    double weight_dt = 0.5;
    bool normalize_fan_in = true;
    int epochs = 3;
    uint64_t shuffle_seed = 0;

    void validate() const;
};

struct GapGradients {
    std::vector<Matrix> dM;
    std::vector<Matrix> dW;
};

// Local gradients at the current node state: dM^(i) = eps^(i+1) (x) sigma(x^(i)),
// dW^(i) its transpose. Reads only the two layers flanking each gap.
GapGradients weight_gradients(const PCNetwork& net);

// One Euler step of the weight ODEs:
//   M += (weight_dt/gamma) (dM/fan - lambda_M M)
//   W += (weight_dt/gamma) (dW/fan - lambda_W W)
// where fan is the source-layer size when normalize_fan_in is set, else 1.
void apply_weight_update(PCNetwork& net, const GapGradients& grads, const LearningConfig& cfg);

// Uniform init on [-1/sqrt(fan_in), +1/sqrt(fan_in)], fan_in = source-layer
// size of each matrix. W is drawn independently of M by default; symmetric
// forces W = M^T (useful for the transpose-symmetry property).
std::pair<std::vector<Matrix>, std::vector<Matrix>> init_weights(
    const std::vector<LayerSpec>& layers, uint64_t seed, bool symmetric = false);

PCNetwork make_network(std::vector<LayerSpec> layers, uint64_t seed, bool symmetric = false);

// Online training: per epoch, per sample in shuffled order - feedforward
// init, settle with the input clamped (alpha=1) and the top pinned to the
// target (beta=0), then one weight update. Statistics are recorded at the
// settled state before each update.
RunReport train(PCNetwork& net, const Dataset& data, const ModeConfig& mode_cfg,
                const LearningConfig& learn_cfg, uint64_t rng_seed);

} // namespace pcgen

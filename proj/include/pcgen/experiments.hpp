#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcgen/data.hpp"
#include "pcgen/learning.hpp"
#include "pcgen/modes.hpp"

namespace pcgen {

// Paper-scale constants bundled per experiment. The `paper` values: tau=0.2,
// gamma=0.8, 5 s settles, decay preset lambda_M = 2*lambda_W = lambda_x = 0.05.
struct ExperimentConfig {
    std::vector<LayerSpec> layers;
    ModeConfig mode;    // lambda_x set when decay is on
    LearningConfig learn;
    bool decay = false;
    uint64_t seed = 1;

    static ExperimentConfig paper_toy(Activation act, bool decay, uint64_t seed);
    static ExperimentConfig paper_mnist(bool decay, uint64_t seed);  // 784-600-600-10, 10 epochs
    static ExperimentConfig scaled_mnist(bool decay, uint64_t seed); // 784-100-100-10, 3 epochs
};

// Batched discriminative pass; samples are settled independently on clones of
// the network (OpenMP over samples), outputs in input order.
std::vector<Vec> discriminate_batch(const PCNetwork& net, const std::vector<Vec>& inputs,
                                    const ModeConfig& cfg);

struct EvalResult {
    double accuracy = 0.0;
    Vec mean_error_norms;      // per layer, averaged over samples
    double converged_fraction = 0.0;
};

EvalResult evaluate(const PCNetwork& net, const Dataset& data, const ModeConfig& cfg);

// One generated sample per class plus its correlation against the class
// reference vector.
struct GenerativeEval {
    std::vector<GenerativeResult> per_class;
    std::vector<double> correlations;
};

GenerativeEval generate_all_classes(const PCNetwork& net, const std::vector<Vec>& references,
                                    const ModeConfig& cfg);

// The toy-task table: {linear, tanh} x {no decay, decay}, fresh dataset and
// network per trial, mean normalized correlation between generated samples
// and exemplars.
struct Table1Options {
    uint64_t seed = 1;
    int trials = 10;
    int samples = 200;
    double noise_sd = 0.1;
};

struct Table1Cell {
    double mean_correlation = 0.0;
    std::vector<double> per_trial; // trial means
};

struct Table1Result {
    // indexed [activation][decay] with 0=linear/no-decay, 1=tanh/decay
    Table1Cell cells[2][2];
};

Table1Result run_table1(const Table1Options& opts);

std::string format_table1(const Table1Result& t);
void write_table1_csv(const std::string& path, const Table1Result& t);

} // namespace pcgen

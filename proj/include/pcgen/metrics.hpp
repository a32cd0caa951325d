#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgen/matrix.hpp"

namespace pcgen {

struct PCNetwork;

// cosine similarity (x . v)/(|x||v|); throws std::domain_error on a zero vector
double normalized_correlation(std::span<const double> x, std::span<const double> v);

// argmax with ties broken toward the lowest index
int argmax(std::span<const double> v);

// fraction of predictions whose argmax equals the label
double accuracy(const std::vector<Vec>& predictions, const std::vector<int>& labels);

// L2 norm of each error layer
Vec error_norms(const PCNetwork& net);

struct RunReport {
    std::vector<double> per_epoch_energy;       // mean settled free energy
    std::vector<double> per_epoch_output_error; // mean ||eps^(n)||_2 at the settled state
    std::vector<Vec> per_epoch_error_norms;     // mean per-layer ||eps^(i)||_2
    Vec final_error_norms;                      // last epoch's per-layer means
    std::optional<double> accuracy;
    std::vector<double> correlations; // per class, when a generative eval ran
    double wall_time = 0.0;           // seconds, excluded from CSV output
    double converged_fraction = 0.0;  // settles that reached tol
};

// One row per epoch; deterministic text (wall time deliberately omitted).
void write_report_csv(const std::string& path, const RunReport& report);

} // namespace pcgen

#pragma once

#include <span>
#include <vector>

#include "pcgen/activation.hpp"
#include "pcgen/errors.hpp"
#include "pcgen/matrix.hpp"

namespace pcgen {

struct LayerSpec {
    int size = 0;
    Activation activation = Activation::Linear;
};

// Clamp gates and integration constants for one settling run.
//
// alpha gates the pull of the bottom error node on x^(1) (1 = input clamped).
// beta gates whether the top state is free (1) or pinned to the target (0).
// lambda_x is the activity-decay rate applied to every non-clamped state
// layer below the top.
struct ModeConfig {
    double alpha = 1.0;
    double beta = 1.0;
    double tau = 0.2;
    double lambda_x = 0.0;
    double dt = 0.02;
    double t_max = 5.0;
    double tol = 1e-5;

    void validate() const;
};

// Layered predictive-coding network.
//
// Layer i holds a state vector x[i] and an error vector eps[i]. Gap i (for
// i in [0, depth-2)) carries the forward weights M[i], shape
// (size[i+1] x size[i]), predicting layer i+1 from sigma(x[i]), and the
// backward weights W[i], shape (size[i] x size[i+1]), carrying errors down.
// nu[i] is the variance parameter of layer i.
struct PCNetwork {
    std::vector<LayerSpec> layers;
    std::vector<Vec> x;
    std::vector<Vec> eps;
    std::vector<Matrix> M;
    std::vector<Matrix> W;
    Vec nu;

    static PCNetwork create(std::vector<LayerSpec> layer_specs);

    int depth() const { return static_cast<int>(layers.size()); }
    int size(int layer) const { return layers[layer].size; }
    Activation activation() const { return layers.front().activation; }

    void check_shapes() const;                 // throws ConfigError
    void check_finite(const char* where) const; // throws DivergenceError
    void zero_state();
};

// Scratch buffers reused across integration steps.
struct StepWorkspace {
    std::vector<Vec> dx;
    std::vector<Vec> deps;
    std::vector<Vec> sx; // sigma(x[i]) for source layers
    Vec mu;              // prediction scratch

    void resize(const PCNetwork& net);
};

struct SettleResult {
    bool converged = false;
    double elapsed = 0.0; // simulated seconds
    int steps = 0;
};

// mu = M_below sigma(x_below); pure helper
Vec prediction(const Matrix& m_below, std::span<const double> x_below, Activation act);

// equilibrium error (x - mu)/nu; test-side oracle, not used by the integrator
Vec error_equilibrium(std::span<const double> x, std::span<const double> mu, double nu);

// One explicit Euler step of the node ODEs. X and Y may be empty:
// an empty X removes the input-comparison drive from eps^(1) (generative
// gating); Y is required when beta == 0, in which case the top state is
// pinned to Y exactly. Returns the max-norm of the node derivatives at the
// pre-step state.
double step_nodes(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                  const ModeConfig& cfg, StepWorkspace& ws);

double step_nodes(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                  const ModeConfig& cfg);

// Integrate until every node derivative is below cfg.tol (max-norm) or
// cfg.t_max simulated seconds elapse.
SettleResult settle(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                    const ModeConfig& cfg);

// magnitude of the free energy: sum_i nu_i/2 ||eps_i||^2
double free_energy(const PCNetwork& net);

// x^(1) <- X, x^(i) <- prediction from below, all errors zeroed
void feedforward_init(PCNetwork& net, std::span<const double> X);

namespace detail {
// Fills ws.dx/ws.deps with the node time-derivatives at the current state and
// returns their max-norm. step_nodes and settle share this path.
double compute_derivatives(PCNetwork& net, std::span<const double> X,
                           std::span<const double> Y, const ModeConfig& cfg,
                           StepWorkspace& ws);
void apply_step(PCNetwork& net, std::span<const double> Y, const ModeConfig& cfg,
                const StepWorkspace& ws);
} // namespace detail

} // namespace pcgen

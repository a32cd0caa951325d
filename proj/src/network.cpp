#include "pcgen/network.hpp"

#include <cmath>
#include <cstdio>

#include "pcgen/kernels.hpp"

namespace pcgen {

void ModeConfig::validate() const {
    if (tau <= 0.0) throw ConfigError("tau must be positive");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (dt >= tau) throw ConfigError("dt must be smaller than tau for a stable explicit step");
    if (t_max < dt) throw ConfigError("t_max must be at least one step");
    if (tol < 0.0) throw ConfigError("tol must be nonnegative");
    if (lambda_x < 0.0) throw ConfigError("lambda_x must be nonnegative");
}

PCNetwork PCNetwork::create(std::vector<LayerSpec> layer_specs) {
    if (layer_specs.empty()) throw ConfigError("network needs at least one layer");
    for (const auto& l : layer_specs) {
        if (l.size < 1) throw ConfigError("layer size must be >= 1");
        if (l.activation != layer_specs.front().activation)
            throw ConfigError("all layers of one network share a single activation");
    }
    PCNetwork net;
    net.layers = std::move(layer_specs);
    const int n = net.depth();
    net.x.resize(n);
    net.eps.resize(n);
    net.nu.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        net.x[i].assign(net.size(i), 0.0);
        net.eps[i].assign(net.size(i), 0.0);
    }
    for (int i = 0; i + 1 < n; ++i) {
        net.M.emplace_back(net.size(i + 1), net.size(i));
        net.W.emplace_back(net.size(i), net.size(i + 1));
    }
    return net;
}

void PCNetwork::check_shapes() const {
    const int n = depth();
    if (static_cast<int>(x.size()) != n || static_cast<int>(eps.size()) != n ||
        static_cast<int>(nu.size()) != n)
        throw ConfigError("per-layer containers out of sync with layer list");
    if (static_cast<int>(M.size()) != n - 1 || static_cast<int>(W.size()) != n - 1)
        throw ConfigError("expected one weight pair per layer gap");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(x[i].size()) != size(i) ||
            static_cast<int>(eps[i].size()) != size(i))
            throw ConfigError("state/error vector size mismatch at layer " + std::to_string(i + 1));
        if (!(nu[i] > 0.0)) throw ConfigError("nu must be positive at every layer");
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (M[i].rows != size(i + 1) || M[i].cols != size(i))
            throw ConfigError("M shape mismatch at gap " + std::to_string(i + 1));
        if (W[i].rows != size(i) || W[i].cols != size(i + 1))
            throw ConfigError("W shape mismatch at gap " + std::to_string(i + 1));
    }
}

void PCNetwork::check_finite(const char* where) const {
    for (int i = 0; i < depth(); ++i) {
        for (double v : x[i])
            if (!std::isfinite(v))
                throw DivergenceError(std::string(where) + ": non-finite state at layer " +
                                          std::to_string(i + 1),
                                      i + 1);
        for (double v : eps[i])
            if (!std::isfinite(v))
                throw DivergenceError(std::string(where) + ": non-finite error at layer " +
                                          std::to_string(i + 1),
                                      i + 1);
    }
}

void PCNetwork::zero_state() {
    for (auto& v : x) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : eps) std::fill(v.begin(), v.end(), 0.0);
}

void StepWorkspace::resize(const PCNetwork& net) {
    const int n = net.depth();
    dx.resize(n);
    deps.resize(n);
    sx.resize(n);
    int max_size = 0;
    for (int i = 0; i < n; ++i) {
        dx[i].assign(net.size(i), 0.0);
        deps[i].assign(net.size(i), 0.0);
        sx[i].assign(net.size(i), 0.0);
        max_size = std::max(max_size, net.size(i));
    }
    mu.assign(max_size, 0.0);
}

Vec prediction(const Matrix& m_below, std::span<const double> x_below, Activation act) {
    if (static_cast<int>(x_below.size()) != m_below.cols)
        throw ConfigError("prediction: weight has " + std::to_string(m_below.cols) +
                          " columns but the source layer has " + std::to_string(x_below.size()) +
                          " nodes");
    Vec sx(x_below.size());
    for (size_t i = 0; i < x_below.size(); ++i) sx[i] = activate(act, x_below[i]);
    Vec out(m_below.rows);
    kernels::matvec(m_below, sx, out);
    return out;
}

Vec error_equilibrium(std::span<const double> x, std::span<const double> mu, double nu) {
    if (x.size() != mu.size()) throw ConfigError("error_equilibrium: size mismatch");
    if (!(nu > 0.0)) throw std::domain_error("error_equilibrium: nu must be positive");
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mu[i]) / nu;
    return out;
}

namespace detail {

double compute_derivatives(PCNetwork& net, std::span<const double> X,
                           std::span<const double> Y, const ModeConfig& cfg,
                           StepWorkspace& ws) {
    (void)Y; // the clamp value enters through apply_step, not the derivatives
    const int n = net.depth();
    const Activation act = net.activation();
    const double inv_tau = 1.0 / cfg.tau;
    double max_deriv = 0.0;

    auto track = [&max_deriv](double v) {
        const double a = std::fabs(v);
        if (a > max_deriv) max_deriv = a;
    };

    // sigma(x) for every source layer
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < net.size(i); ++j) ws.sx[i][j] = activate(act, net.x[i][j]);

    // error nodes: bottom compares raw state to X, all others to the
    // prediction from below
    if (X.empty()) {
        for (int j = 0; j < net.size(0); ++j) {
            ws.deps[0][j] = -net.nu[0] * net.eps[0][j] * inv_tau;
            track(ws.deps[0][j]);
        }
    } else {
        for (int j = 0; j < net.size(0); ++j) {
            ws.deps[0][j] = (net.x[0][j] - X[j] - net.nu[0] * net.eps[0][j]) * inv_tau;
            track(ws.deps[0][j]);
        }
    }
    for (int i = 1; i < n; ++i) {
        std::span<double> mu(ws.mu.data(), net.size(i));
        kernels::matvec(net.M[i - 1], ws.sx[i - 1], mu);
        for (int j = 0; j < net.size(i); ++j) {
            ws.deps[i][j] = (net.x[i][j] - mu[j] - net.nu[i] * net.eps[i][j]) * inv_tau;
            track(ws.deps[i][j]);
        }
    }

    // state nodes
    for (int i = 0; i + 1 < n; ++i) {
        std::span<double> down(ws.dx[i]); // reuse as W eps^(i+1) scratch
        kernels::matvec(net.W[i], net.eps[i + 1], down);
        const double pull = (i == 0) ? cfg.alpha : 1.0;
        for (int j = 0; j < net.size(i); ++j) {
            const double sp = activate_deriv(act, net.x[i][j]);
            ws.dx[i][j] = (down[j] * sp - pull * net.eps[i][j] - cfg.lambda_x * net.x[i][j]) *
                          inv_tau;
            track(ws.dx[i][j]);
        }
    }
    if (cfg.beta == 0.0) {
        std::fill(ws.dx[n - 1].begin(), ws.dx[n - 1].end(), 0.0);
    } else {
        for (int j = 0; j < net.size(n - 1); ++j) {
            ws.dx[n - 1][j] = -cfg.beta * net.eps[n - 1][j] * inv_tau;
            track(ws.dx[n - 1][j]);
        }
    }
    return max_deriv;
}

void apply_step(PCNetwork& net, std::span<const double> Y, const ModeConfig& cfg,
                const StepWorkspace& ws) {
    const int n = net.depth();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < net.size(i); ++j) {
            net.x[i][j] += cfg.dt * ws.dx[i][j];
            net.eps[i][j] += cfg.dt * ws.deps[i][j];
        }
    }
    if (cfg.beta == 0.0)
        std::copy(Y.begin(), Y.end(), net.x[n - 1].begin()); // held exactly at the target
}

} // namespace detail

namespace {

void check_drive_sizes(const PCNetwork& net, std::span<const double> X,
                       std::span<const double> Y, const ModeConfig& cfg) {
    if (net.depth() < 2) throw ConfigError("node dynamics need at least two layers");
    if (!X.empty() && static_cast<int>(X.size()) != net.size(0))
        throw ConfigError("input size does not match layer 1");
    if (!Y.empty() && static_cast<int>(Y.size()) != net.size(net.depth() - 1))
        throw ConfigError("target size does not match the top layer");
    if (cfg.beta == 0.0 && Y.empty())
        throw ConfigError("beta = 0 clamps the top layer and requires a target");
}

} // namespace

double step_nodes(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                  const ModeConfig& cfg, StepWorkspace& ws) {
    cfg.validate();
    net.check_shapes();
    check_drive_sizes(net, X, Y, cfg);
    const double max_deriv = detail::compute_derivatives(net, X, Y, cfg, ws);
    detail::apply_step(net, Y, cfg, ws);
    net.check_finite("step_nodes");
    return max_deriv;
}

double step_nodes(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                  const ModeConfig& cfg) {
    StepWorkspace ws;
    ws.resize(net);
    return step_nodes(net, X, Y, cfg, ws);
}

SettleResult settle(PCNetwork& net, std::span<const double> X, std::span<const double> Y,
                    const ModeConfig& cfg) {
    cfg.validate();
    net.check_shapes();
    check_drive_sizes(net, X, Y, cfg);
    if (cfg.beta == 0.0) std::copy(Y.begin(), Y.end(), net.x[net.depth() - 1].begin());

    StepWorkspace ws;
    ws.resize(net);

    SettleResult res;
    while (true) {
        const double max_deriv = detail::compute_derivatives(net, X, Y, cfg, ws);
        if (max_deriv < cfg.tol) {
            res.converged = true;
            net.check_finite("settle");
            return res;
        }
        if (res.elapsed >= cfg.t_max - 0.5 * cfg.dt) {
            net.check_finite("settle");
            return res;
        }
        detail::apply_step(net, Y, cfg, ws);
        ++res.steps;
        res.elapsed = res.steps * cfg.dt;
        if ((res.steps & 0xf) == 0) net.check_finite("settle");
    }
}

double free_energy(const PCNetwork& net) {
    double f = 0.0;
    for (int i = 0; i < net.depth(); ++i) {
        double s = 0.0;
        for (double v : net.eps[i]) s += v * v;
        f += 0.5 * net.nu[i] * s;
    }
    return f;
}

void feedforward_init(PCNetwork& net, std::span<const double> X) {
    net.check_shapes();
    if (static_cast<int>(X.size()) != net.size(0))
        throw ConfigError("feedforward_init: input size does not match layer 1");
    const Activation act = net.activation();
    std::copy(X.begin(), X.end(), net.x[0].begin());
    Vec sx;
    for (int i = 1; i < net.depth(); ++i) {
        sx.resize(net.size(i - 1));
        for (int j = 0; j < net.size(i - 1); ++j) sx[j] = activate(act, net.x[i - 1][j]);
        kernels::matvec(net.M[i - 1], sx, net.x[i]);
    }
    for (auto& e : net.eps) std::fill(e.begin(), e.end(), 0.0);
}

} // namespace pcgen

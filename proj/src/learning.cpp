#include "pcgen/learning.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "pcgen/data.hpp"
#include "pcgen/kernels.hpp"
#include "pcgen/rng.hpp"

namespace pcgen {

void LearningConfig::validate() const {
    if (gamma <= 0.0) throw ConfigError("gamma must be positive");
    if (weight_dt <= 0.0) throw ConfigError("weight_dt must be positive");
    if (lambda_M < 0.0 || lambda_W < 0.0) throw ConfigError("weight decay must be nonnegative");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

GapGradients weight_gradients(const PCNetwork& net) {
    net.check_shapes();
    const Activation act = net.activation();
    GapGradients g;
    g.dM.reserve(net.M.size());
    g.dW.reserve(net.W.size());
    Vec sx;
    for (int i = 0; i + 1 < net.depth(); ++i) {
        sx.resize(net.size(i));
        for (int j = 0; j < net.size(i); ++j) sx[j] = activate(act, net.x[i][j]);
        Matrix dm(net.size(i + 1), net.size(i));
        kernels::outer(net.eps[i + 1], sx, dm);
        Matrix dw(net.size(i), net.size(i + 1));
        kernels::outer(sx, net.eps[i + 1], dw);
        g.dM.push_back(std::move(dm));
        g.dW.push_back(std::move(dw));
    }
    return g;
}

void apply_weight_update(PCNetwork& net, const GapGradients& grads, const LearningConfig& cfg) {
    cfg.validate();
    if (grads.dM.size() != net.M.size() || grads.dW.size() != net.W.size())
        throw ConfigError("apply_weight_update: gradient count does not match gaps");
    const double lr = cfg.weight_dt / cfg.gamma;
    for (size_t i = 0; i < net.M.size(); ++i) {
        if (grads.dM[i].rows != net.M[i].rows || grads.dM[i].cols != net.M[i].cols ||
            grads.dW[i].rows != net.W[i].rows || grads.dW[i].cols != net.W[i].cols)
            throw ConfigError("apply_weight_update: gradient shape mismatch at gap " +
                              std::to_string(i + 1));
        const double fan = cfg.normalize_fan_in ? static_cast<double>(net.size(static_cast<int>(i))) : 1.0;
        kernels::weight_axpby(net.M[i], lr / fan, grads.dM[i], lr * cfg.lambda_M);
        kernels::weight_axpby(net.W[i], lr / fan, grads.dW[i], lr * cfg.lambda_W);
    }
    for (size_t i = 0; i < net.M.size(); ++i) {
        for (double v : net.M[i].data)
            if (!std::isfinite(v))
                throw DivergenceError("weight update produced a non-finite M at gap " +
                                          std::to_string(i + 1),
                                      static_cast<int>(i + 1));
        for (double v : net.W[i].data)
            if (!std::isfinite(v))
                throw DivergenceError("weight update produced a non-finite W at gap " +
                                          std::to_string(i + 1),
                                      static_cast<int>(i + 1));
    }
}

std::pair<std::vector<Matrix>, std::vector<Matrix>> init_weights(
    const std::vector<LayerSpec>& layers, uint64_t seed, bool symmetric) {
    if (layers.size() < 2) throw ConfigError("init_weights: need at least two layers");
    Rng rng(seed);
    std::vector<Matrix> ms, ws;
    for (size_t i = 0; i + 1 < layers.size(); ++i) {
        Matrix m(layers[i + 1].size, layers[i].size);
        const double bound_m = 1.0 / std::sqrt(static_cast<double>(layers[i].size));
        for (auto& v : m.data) v = rng.uniform(-bound_m, bound_m);
        Matrix w(layers[i].size, layers[i + 1].size);
        if (symmetric) {
            w = transpose(m);
        } else {
            const double bound_w = 1.0 / std::sqrt(static_cast<double>(layers[i + 1].size));
            for (auto& v : w.data) v = rng.uniform(-bound_w, bound_w);
        }
        ms.push_back(std::move(m));
        ws.push_back(std::move(w));
    }
    return {std::move(ms), std::move(ws)};
}

PCNetwork make_network(std::vector<LayerSpec> layers, uint64_t seed, bool symmetric) {
    PCNetwork net = PCNetwork::create(std::move(layers));
    auto [ms, ws] = init_weights(net.layers, seed, symmetric);
    net.M = std::move(ms);
    net.W = std::move(ws);
    return net;
}

RunReport train(PCNetwork& net, const Dataset& data, const ModeConfig& mode_cfg,
                const LearningConfig& learn_cfg, uint64_t rng_seed) {
    mode_cfg.validate();
    learn_cfg.validate();
    data.validate();
    net.check_shapes();
    if (data.size() == 0) throw ConfigError("train: dataset is empty");
    if (data.meta.input_dim != net.size(0))
        throw ConfigError("train: dataset input dim does not match layer 1");
    if (static_cast<int>(data.targets.front().size()) != net.size(net.depth() - 1))
        throw ConfigError("train: target dim does not match the top layer");

    ModeConfig cfg = mode_cfg;
    cfg.alpha = 1.0;
    cfg.beta = 0.0;

    const auto t0 = std::chrono::steady_clock::now();
    Rng shuffle_rng(rng_seed ^ learn_cfg.shuffle_seed);
    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), size_t{0});

    RunReport report;
    const int n_layers = net.depth();
    size_t settles = 0, converged = 0;

    for (int epoch = 0; epoch < learn_cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double energy_sum = 0.0, out_err_sum = 0.0;
        Vec norm_sums(n_layers, 0.0);
        for (size_t k = 0; k < order.size(); ++k) {
            const size_t idx = order[k];
            try {
                feedforward_init(net, data.inputs[idx]);
                const SettleResult sr = settle(net, data.inputs[idx], data.targets[idx], cfg);
                converged += sr.converged ? 1 : 0;
                ++settles;
                energy_sum += free_energy(net);
                const Vec norms = error_norms(net);
                for (int i = 0; i < n_layers; ++i) norm_sums[i] += norms[i];
                out_err_sum += norms[n_layers - 1];
                apply_weight_update(net, weight_gradients(net), learn_cfg);
            } catch (const DivergenceError& e) {
                throw DivergenceError("epoch " + std::to_string(epoch + 1) + ", sample " +
                                          std::to_string(idx) + ": " + e.what(),
                                      e.layer());
            }
        }
        const double inv = 1.0 / static_cast<double>(data.size());
        report.per_epoch_energy.push_back(energy_sum * inv);
        report.per_epoch_output_error.push_back(out_err_sum * inv);
        Vec means(n_layers);
        for (int i = 0; i < n_layers; ++i) means[i] = norm_sums[i] * inv;
        report.per_epoch_error_norms.push_back(std::move(means));
    }
    report.final_error_norms = report.per_epoch_error_norms.back();
    report.converged_fraction =
        settles ? static_cast<double>(converged) / static_cast<double>(settles) : 0.0;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace pcgen

#include "pcgen/modes.hpp"

#include <cmath>

namespace pcgen {

DiscriminationResult discriminate(PCNetwork& net, std::span<const double> X, ModeConfig cfg) {
    cfg.alpha = 1.0;
    cfg.beta = 1.0;
    feedforward_init(net, X);
    const SettleResult sr = settle(net, X, {}, cfg);
    DiscriminationResult res;
    res.output = net.x[net.depth() - 1];
    res.converged = sr.converged;
    res.elapsed = sr.elapsed;
    return res;
}

GenerativeResult generate(PCNetwork& net, std::span<const double> Y, ModeConfig cfg,
                          GenerateOptions opts) {
    cfg.alpha = 0.0;
    cfg.beta = 0.0;
    net.check_shapes();
    if (static_cast<int>(Y.size()) != net.size(net.depth() - 1))
        throw ConfigError("generate: class vector size does not match the top layer");
    if (!opts.warm_start) net.zero_state();

    const SettleResult sr = settle(net, {}, Y, cfg);

    GenerativeResult res;
    res.sample = net.x[0];
    res.converged = sr.converged;
    const int n = net.depth();
    const Vec mu = prediction(net.M[n - 2], net.x[n - 2], net.activation());
    double r = 0.0;
    for (int j = 0; j < net.size(n - 1); ++j) r += (Y[j] - mu[j]) * (Y[j] - mu[j]);
    res.residual = std::sqrt(r);
    res.energy = free_energy(net);
    return res;
}

} // namespace pcgen

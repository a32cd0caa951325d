#include "pcgen/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pcgen/errors.hpp"
#include "pcgen/network.hpp"

namespace pcgen {

double normalized_correlation(std::span<const double> x, std::span<const double> v) {
    if (x.size() != v.size() || x.empty())
        throw std::domain_error("normalized_correlation: vectors must be nonempty and equal-sized");
    double dot = 0.0, nx = 0.0, nv = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * v[i];
        nx += x[i] * x[i];
        nv += v[i] * v[i];
    }
    if (nx == 0.0 || nv == 0.0)
        throw std::domain_error("normalized_correlation: undefined for a zero vector");
    return dot / (std::sqrt(nx) * std::sqrt(nv));
}

int argmax(std::span<const double> v) {
    if (v.empty()) throw std::domain_error("argmax: empty vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i; // strict: ties keep the lowest index
    return best;
}

double accuracy(const std::vector<Vec>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw ConfigError("accuracy: prediction/label count mismatch");
    if (predictions.empty()) return 0.0;
    size_t hits = 0;
    for (size_t i = 0; i < predictions.size(); ++i)
        if (argmax(predictions[i]) == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

Vec error_norms(const PCNetwork& net) {
    Vec out(net.depth());
    for (int i = 0; i < net.depth(); ++i) {
        double s = 0.0;
        for (double v : net.eps[i]) s += v * v;
        out[i] = std::sqrt(s);
    }
    return out;
}

void write_report_csv(const std::string& path, const RunReport& report) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open report file for writing: " + path);
    const size_t layers =
        report.per_epoch_error_norms.empty() ? 0 : report.per_epoch_error_norms.front().size();
    f << "epoch,mean_energy,mean_output_error";
    for (size_t i = 0; i < layers; ++i) f << ",mean_eps_norm_l" << (i + 1);
    f << "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        f << ',' << buf;
    };
    for (size_t e = 0; e < report.per_epoch_energy.size(); ++e) {
        f << (e + 1);
        put(report.per_epoch_energy[e]);
        put(report.per_epoch_output_error[e]);
        for (double v : report.per_epoch_error_norms[e]) put(v);
        f << "\n";
    }
    if (!f) throw DataError("failed while writing report: " + path);
}

} // namespace pcgen

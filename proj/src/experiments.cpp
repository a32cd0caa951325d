#include "pcgen/experiments.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcgen/errors.hpp"
#include "pcgen/metrics.hpp"

namespace pcgen {

namespace {

ModeConfig paper_mode(bool decay) {
    ModeConfig m;
    m.tau = 0.2;
    m.dt = 0.02;
    m.t_max = 5.0;
    m.tol = 1e-5;
    m.lambda_x = decay ? 0.05 : 0.0;
    return m;
}

LearningConfig paper_learn(bool decay, int epochs) {
    LearningConfig l;
    l.gamma = 0.8;
    l.lambda_M = decay ? 0.05 : 0.0;
    l.lambda_W = decay ? 0.025 : 0.0; // lambda_W = lambda_M / 2
    l.epochs = epochs;
    return l;
}

} // namespace

ExperimentConfig ExperimentConfig::paper_toy(Activation act, bool decay, uint64_t seed) {
    ExperimentConfig c;
    c.layers = {{10, act}, {5, act}, {3, act}};
    c.mode = paper_mode(decay);
    c.learn = paper_learn(decay, 3);
    c.decay = decay;
    c.seed = seed;
    return c;
}

ExperimentConfig ExperimentConfig::paper_mnist(bool decay, uint64_t seed) {
    ExperimentConfig c;
    c.layers = {{784, Activation::Tanh},
                {600, Activation::Tanh},
                {600, Activation::Tanh},
                {10, Activation::Tanh}};
    c.mode = paper_mode(decay);
    c.learn = paper_learn(decay, 10);
    c.decay = decay;
    c.seed = seed;
    return c;
}

ExperimentConfig ExperimentConfig::scaled_mnist(bool decay, uint64_t seed) {
    ExperimentConfig c;
    c.layers = {{784, Activation::Tanh},
                {100, Activation::Tanh},
                {100, Activation::Tanh},
                {10, Activation::Tanh}};
    c.mode = paper_mode(decay);
    c.learn = paper_learn(decay, 3);
    c.decay = decay;
    c.seed = seed;
    return c;
}

std::vector<Vec> discriminate_batch(const PCNetwork& net, const std::vector<Vec>& inputs,
                                    const ModeConfig& cfg) {
    std::vector<Vec> outputs(inputs.size());
    std::vector<uint8_t> ok(inputs.size(), 0);
#pragma omp parallel
    {
        PCNetwork local = net; // independent clone per thread
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(inputs.size()); ++i) {
            DiscriminationResult r = discriminate(local, inputs[i], cfg);
            outputs[i] = std::move(r.output);
            ok[i] = r.converged ? 1 : 0;
        }
    }
    return outputs;
}

EvalResult evaluate(const PCNetwork& net, const Dataset& data, const ModeConfig& cfg) {
    data.validate();
    EvalResult res;
    res.mean_error_norms.assign(net.depth(), 0.0);
    std::vector<Vec> outputs(data.size());
    std::vector<Vec> norms(data.size());
    std::vector<uint8_t> ok(data.size(), 0);
#pragma omp parallel
    {
        PCNetwork local = net;
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(data.size()); ++i) {
            DiscriminationResult r = discriminate(local, data.inputs[i], cfg);
            outputs[i] = std::move(r.output);
            norms[i] = error_norms(local);
            ok[i] = r.converged ? 1 : 0;
        }
    }
    size_t conv = 0;
    for (size_t i = 0; i < data.size(); ++i) {
        for (int l = 0; l < net.depth(); ++l) res.mean_error_norms[l] += norms[i][l];
        conv += ok[i];
    }
    for (double& v : res.mean_error_norms) v /= static_cast<double>(data.size());
    res.accuracy = accuracy(outputs, data.labels);
    res.converged_fraction = static_cast<double>(conv) / static_cast<double>(data.size());
    return res;
}

GenerativeEval generate_all_classes(const PCNetwork& net, const std::vector<Vec>& references,
                                    const ModeConfig& cfg) {
    GenerativeEval out;
    const int n_classes = net.size(net.depth() - 1);
    out.per_class.resize(n_classes);
#pragma omp parallel
    {
        PCNetwork local = net;
#pragma omp for schedule(static)
        for (int c = 0; c < n_classes; ++c) {
            const Vec y = one_hot(c, n_classes);
            out.per_class[c] = generate(local, y, cfg);
        }
    }
    for (int c = 0; c < n_classes; ++c) {
        if (c < static_cast<int>(references.size()) && !references[c].empty())
            out.correlations.push_back(
                normalized_correlation(out.per_class[c].sample, references[c]));
    }
    return out;
}

Table1Result run_table1(const Table1Options& opts) {
    Table1Result table;
    struct Job {
        int act, decay, trial;
    };
    std::vector<Job> jobs;
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d)
            for (int t = 0; t < opts.trials; ++t) jobs.push_back({a, d, t});
    std::vector<double> trial_means(jobs.size(), 0.0);

#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < static_cast<long>(jobs.size()); ++j) {
        const Job job = jobs[j];
        const Activation act = job.act ? Activation::Tanh : Activation::Linear;
        ExperimentConfig cfg =
            ExperimentConfig::paper_toy(act, job.decay != 0, opts.seed + job.trial);
        // the dataset depends on the trial only, so decay and no-decay nets of
        // one trial see the same data
        const Dataset data =
            make_toy_dataset(opts.seed + job.trial, opts.samples, opts.noise_sd);
        PCNetwork net =
            make_network(cfg.layers, cfg.seed * 7919 + job.act * 131 + job.decay * 17);
        train(net, data, cfg.mode, cfg.learn, cfg.seed);
        const GenerativeEval gen = generate_all_classes(net, data.exemplars, cfg.mode);
        double mean = 0.0;
        for (double c : gen.correlations) mean += c;
        trial_means[j] = mean / static_cast<double>(gen.correlations.size());
    }

    for (size_t j = 0; j < jobs.size(); ++j)
        table.cells[jobs[j].act][jobs[j].decay].per_trial.push_back(trial_means[j]);
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d) {
            double s = 0.0;
            for (double v : table.cells[a][d].per_trial) s += v;
            table.cells[a][d].mean_correlation =
                s / static_cast<double>(table.cells[a][d].per_trial.size());
        }
    return table;
}

std::string format_table1(const Table1Result& t) {
    char buf[256];
    std::ostringstream os;
    os << "Correlation between generated sample and exemplar\n";
    os << "  Network    Linear   tanh\n";
    std::snprintf(buf, sizeof buf, "  No Decay   %.3f    %.3f\n",
                  t.cells[0][0].mean_correlation, t.cells[1][0].mean_correlation);
    os << buf;
    std::snprintf(buf, sizeof buf, "  Decay      %.3f    %.3f\n",
                  t.cells[0][1].mean_correlation, t.cells[1][1].mean_correlation);
    os << buf;
    return os.str();
}

void write_table1_csv(const std::string& path, const Table1Result& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << "activation,decay,trial,mean_correlation\n";
    char buf[64];
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d)
            for (size_t i = 0; i < t.cells[a][d].per_trial.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", t.cells[a][d].per_trial[i]);
                f << (a ? "tanh" : "linear") << ',' << (d ? "on" : "off") << ',' << i << ','
                  << buf << "\n";
            }
    if (!f) throw DataError("failed while writing: " + path);
}

} // namespace pcgen

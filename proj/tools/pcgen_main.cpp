// pcgen command-line tool: train networks, evaluate them, generate samples,
// check the min-norm construction, and reproduce the toy-task table.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcgen/checkpoint.hpp"
#include "pcgen/data.hpp"
#include "pcgen/digits.hpp"
#include "pcgen/errors.hpp"
#include "pcgen/experiments.hpp"
#include "pcgen/kernels.hpp"
#include "pcgen/metrics.hpp"
#include "pcgen/minnorm.hpp"
#include "pcgen/pgm.hpp"
#include "pcgen/rng.hpp"

namespace fs = std::filesystem;
using namespace pcgen;

namespace {

struct TrainArgs {
    std::string preset = "paper-toy";
    std::string decay = "on";
    std::string activation;
    std::string layers;
    std::string dataset;
    std::string out = ".";
    uint64_t seed = 1;
    int epochs = -1;
    int train_limit = 0;
    double dt = -1.0, tol = -1.0, t_max = -1.0, weight_dt = -1.0;
};

std::string data_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("PCGEN_DATA_DIR")) return env;
    return "";
}

std::vector<LayerSpec> parse_layers(const std::string& s, Activation act) {
    std::vector<LayerSpec> out;
    std::istringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back({std::stoi(part), act});
    if (out.size() < 2) throw ConfigError("--layers needs at least two comma-separated sizes");
    return out;
}

std::string idx_path(const std::string& dir, const std::string& stem) {
    for (const char* suffix : {"", ".gz"}) {
        const fs::path p = fs::path(dir) / (stem + suffix);
        if (fs::exists(p)) return p.string();
    }
    throw DataError("cannot find " + stem + "[.gz] under '" + dir + "'");
}

Dataset load_idx_dataset(const std::string& dir, bool train_split) {
    const std::string img = train_split ? "train-images-idx3-ubyte" : "t10k-images-idx3-ubyte";
    const std::string lab = train_split ? "train-labels-idx1-ubyte" : "t10k-labels-idx1-ubyte";
    return load_mnist_idx(idx_path(dir, img), idx_path(dir, lab));
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(part);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_train(const TrainArgs& a) {
    const bool decay_on = a.decay == "on";
    if (a.decay != "on" && a.decay != "off") throw ConfigError("--decay must be on|off");

    ExperimentConfig cfg;
    std::string dataset_name;
    Dataset data;
    if (a.preset == "paper-toy") {
        const Activation act =
            activation_from_string(a.activation.empty() ? "linear" : a.activation);
        cfg = ExperimentConfig::paper_toy(act, decay_on, a.seed);
        dataset_name = a.dataset.empty() ? "toy" : a.dataset;
    } else if (a.preset == "paper-mnist" || a.preset == "scaled-mnist") {
        cfg = a.preset == "paper-mnist" ? ExperimentConfig::paper_mnist(decay_on, a.seed)
                                        : ExperimentConfig::scaled_mnist(decay_on, a.seed);
        if (!a.activation.empty())
            for (auto& l : cfg.layers) l.activation = activation_from_string(a.activation);
        dataset_name = a.dataset;
    } else {
        throw ConfigError("unknown preset '" + a.preset +
                          "' (expected paper-toy|paper-mnist|scaled-mnist)");
    }
    if (!a.layers.empty()) cfg.layers = parse_layers(a.layers, cfg.layers.front().activation);
    if (a.epochs > 0) cfg.learn.epochs = a.epochs;
    if (a.dt > 0) cfg.mode.dt = a.dt;
    if (a.tol >= 0) cfg.mode.tol = a.tol;
    if (a.t_max > 0) cfg.mode.t_max = a.t_max;
    if (a.weight_dt > 0) cfg.learn.weight_dt = a.weight_dt;

    if (dataset_name == "toy" || (a.preset == "paper-toy" && dataset_name.empty())) {
        dataset_name = "toy";
        data = make_toy_dataset(a.seed, 200, 0.1, cfg.layers.back().size,
                                cfg.layers.front().size);
    } else {
        const std::string root = data_root(dataset_name);
        if (root.empty())
            throw ConfigError("no dataset: pass --dataset DIR or set PCGEN_DATA_DIR");
        data = load_idx_dataset(root, /*train_split=*/true);
        if (a.train_limit > 0 && static_cast<size_t>(a.train_limit) < data.size())
            data = data.subset(0, a.train_limit);
        dataset_name = data.meta.name;
    }
    data.validate();
    fs::create_directories(a.out);

    PCNetwork net = make_network(cfg.layers, a.seed);
    std::cout << "training " << a.preset << " (decay " << a.decay << ", seed " << a.seed
              << ", " << data.size() << " samples, " << cfg.learn.epochs << " epochs)\n";
    const RunReport report = train(net, data, cfg.mode, cfg.learn, a.seed);
    for (size_t e = 0; e < report.per_epoch_energy.size(); ++e)
        std::cout << "  epoch " << (e + 1) << ": mean energy " << fmt(report.per_epoch_energy[e])
                  << ", mean ||eps_top|| " << fmt(report.per_epoch_output_error[e]) << "\n";
    std::cout << "  settled-to-tol fraction " << fmt(report.converged_fraction) << ", wall "
              << fmt(report.wall_time) << " s\n";

    Checkpoint ckpt = Checkpoint::from_network(net);
    ckpt.exemplars = data.exemplars;
    ckpt.meta = {{"preset", a.preset},
                 {"dataset", dataset_name},
                 {"seed", std::to_string(a.seed)},
                 {"epochs", std::to_string(cfg.learn.epochs)},
                 {"decay", a.decay},
                 {"lambda_M", fmt(cfg.learn.lambda_M)},
                 {"lambda_W", fmt(cfg.learn.lambda_W)},
                 {"lambda_x", fmt(cfg.mode.lambda_x)},
                 {"tau", fmt(cfg.mode.tau)},
                 {"gamma", fmt(cfg.learn.gamma)},
                 {"weight_dt", fmt(cfg.learn.weight_dt)},
                 {"dt", fmt(cfg.mode.dt)},
                 {"t_max", fmt(cfg.mode.t_max)},
                 {"tol", fmt(cfg.mode.tol)}};
    if (data.meta.image_rows > 0)
        ckpt.meta.emplace_back("image", std::to_string(data.meta.image_rows) + "x" +
                                            std::to_string(data.meta.image_cols));

    std::ostringstream stem;
    stem << a.preset << "_decay-" << a.decay << "_seed" << a.seed;
    const std::string ckpt_path = (fs::path(a.out) / (stem.str() + ".ckpt")).string();
    const std::string csv_path = (fs::path(a.out) / (stem.str() + "_report.csv")).string();
    save_checkpoint(ckpt_path, ckpt);
    write_report_csv(csv_path, report);
    std::cout << "wrote " << ckpt_path << "\nwrote " << csv_path << "\n";
    return 0;
}

ModeConfig mode_from_checkpoint(const Checkpoint& c) {
    ModeConfig m;
    auto opt = [&](const std::string& k, double& dst) {
        const std::string v = c.meta_value(k);
        if (!v.empty()) dst = std::stod(v);
    };
    opt("tau", m.tau);
    opt("lambda_x", m.lambda_x);
    opt("dt", m.dt);
    opt("t_max", m.t_max);
    opt("tol", m.tol);
    return m;
}

Dataset dataset_for_checkpoint(const Checkpoint& ckpt, const std::string& dataset_flag,
                               bool train_split, int limit) {
    const std::string name =
        dataset_flag.empty() ? ckpt.meta_value("dataset") : dataset_flag;
    Dataset data;
    if (name == "toy") {
        const uint64_t seed = std::stoull(ckpt.meta_value("seed").empty()
                                              ? "1"
                                              : ckpt.meta_value("seed"));
        data = make_toy_dataset(seed, 200, 0.1, ckpt.layer_sizes.back(),
                                ckpt.layer_sizes.front());
    } else {
        const std::string root = data_root(name == "mnist" ? "" : name);
        if (root.empty())
            throw ConfigError("no dataset: pass --dataset DIR or set PCGEN_DATA_DIR");
        data = load_idx_dataset(root, train_split);
    }
    if (limit > 0 && static_cast<size_t>(limit) < data.size()) data = data.subset(0, limit);
    if (data.meta.input_dim != ckpt.layer_sizes.front())
        throw ConfigError("checkpoint expects input dim " +
                          std::to_string(ckpt.layer_sizes.front()) + " but dataset has " +
                          std::to_string(data.meta.input_dim));
    if (data.meta.n_classes != ckpt.layer_sizes.back())
        throw ConfigError("checkpoint expects " + std::to_string(ckpt.layer_sizes.back()) +
                          " classes but dataset has " + std::to_string(data.meta.n_classes));
    return data;
}

int cmd_eval(const std::string& ckpt_path, const std::string& dataset_flag, bool train_split,
             int limit, double tol, double t_max) {
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    PCNetwork net = ckpt.to_network();
    ModeConfig cfg = mode_from_checkpoint(ckpt);
    if (tol >= 0) cfg.tol = tol;
    if (t_max > 0) cfg.t_max = t_max;
    const Dataset data = dataset_for_checkpoint(ckpt, dataset_flag, train_split, limit);

    const EvalResult r = evaluate(net, data, cfg);
    std::cout << "samples " << data.size() << "\naccuracy " << fmt(r.accuracy) << "\n";
    std::cout << "mean error-node norms:";
    for (size_t i = 0; i < r.mean_error_norms.size(); ++i)
        std::cout << " l" << (i + 1) << "=" << fmt(r.mean_error_norms[i]);
    std::cout << "\nconverged fraction " << fmt(r.converged_fraction) << "\n";
    return 0;
}

int cmd_generate(const std::string& ckpt_path, const std::string& classes_flag,
                 const std::string& out_dir, double lambda_x_override, double t_max_override) {
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    PCNetwork net = ckpt.to_network();
    ModeConfig cfg = mode_from_checkpoint(ckpt);
    if (lambda_x_override >= 0) cfg.lambda_x = lambda_x_override;
    if (t_max_override > 0) cfg.t_max = t_max_override;

    const int n_classes = ckpt.layer_sizes.back();
    std::vector<int> classes;
    if (classes_flag.empty() || classes_flag == "all") {
        for (int c = 0; c < n_classes; ++c) classes.push_back(c);
    } else {
        for (const auto& tok : split_csv(classes_flag)) classes.push_back(std::stoi(tok));
        for (int c : classes)
            if (c < 0 || c >= n_classes)
                throw ConfigError("class " + std::to_string(c) + " out of range [0," +
                                  std::to_string(n_classes) + ")");
    }

    fs::create_directories(out_dir);
    int image_rows = 0, image_cols = 0;
    const std::string img_meta = ckpt.meta_value("image");
    if (const auto xpos = img_meta.find('x'); xpos != std::string::npos) {
        image_rows = std::stoi(img_meta.substr(0, xpos));
        image_cols = std::stoi(img_meta.substr(xpos + 1));
    }

    std::ostringstream vec_csv;
    vec_csv << "class,converged,residual,correlation,components...\n";
    std::cout << "class  converged  residual   correlation\n";
    for (int c : classes) {
        const Vec y = one_hot(c, n_classes);
        const GenerativeResult r = generate(net, y, cfg);
        double corr = std::numeric_limits<double>::quiet_NaN();
        if (c < static_cast<int>(ckpt.exemplars.size()))
            corr = normalized_correlation(r.sample, ckpt.exemplars[c]);
        std::printf("%-6d %-10s %-10.3g %.4f\n", c, r.converged ? "yes" : "no", r.residual,
                    corr);
        vec_csv << c << ',' << (r.converged ? 1 : 0) << ',' << fmt(r.residual) << ',' << fmt(corr);
        for (double v : r.sample) vec_csv << ',' << fmt(v);
        vec_csv << "\n";
        if (image_rows > 0) {
            std::vector<uint8_t> px(r.sample.size());
            for (size_t i = 0; i < r.sample.size(); ++i) px[i] = unit_to_pixel(r.sample[i]);
            const std::string p =
                (fs::path(out_dir) / ("generated_class" + std::to_string(c) + ".pgm")).string();
            write_pgm(p, image_rows, image_cols, px);
        }
    }
    const std::string csv_path = (fs::path(out_dir) / "generated.csv").string();
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + csv_path);
    f << vec_csv.str();
    std::cout << "wrote " << csv_path << "\n";
    return 0;
}

int cmd_theorem_check(int m, int n, int r, int trials, uint64_t seed) {
    if (!(r <= n && n < m)) {
        std::cout << "hypothesis violated: need r <= n < m, got m=" << m << " n=" << n
                  << " r=" << r << "\n";
        return 2;
    }
    Rng rng(seed);
    double worst_resid = 0.0, worst_rec = 0.0, worst_margin = 1e300;
    for (int t = 0; t < trials; ++t) {
        Matrix x(m, r), y(n, r);
        for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
        for (auto& v : y.data) v = rng.uniform(-1.0, 1.0);
        const TheoremReport rep = verify_theorem(x, y, 20, rng.next_u64());
        if (!rep.pass) {
            std::cout << "trial " << t << " FAILED: " << rep.message << "\n";
            return 1;
        }
        worst_resid = std::max(worst_resid, rep.max_construction_residual);
        worst_rec = std::max(worst_rec, rep.max_recovery_rel_err);
        worst_margin = std::min(worst_margin, rep.min_margin);
    }
    std::cout << "theorem check (m=" << m << ", n=" << n << ", r=" << r << ", " << trials
              << " trials): PASS\n";
    std::cout << "  worst |AX-Y|        " << fmt(worst_resid) << "\n";
    std::cout << "  worst recovery err  " << fmt(worst_rec) << "\n";
    std::cout << "  worst margin        " << fmt(worst_margin) << "\n";
    return 0;
}

int cmd_table1(uint64_t seed, int trials, const std::string& out_dir) {
    Table1Options opts;
    opts.seed = seed;
    opts.trials = trials;
    const Table1Result t = run_table1(opts);
    std::cout << format_table1(t);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const std::string p =
            (fs::path(out_dir) / ("table1_seed" + std::to_string(seed) + ".csv")).string();
        write_table1_csv(p, t);
        std::cout << "wrote " << p << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"predictive coding network simulator and generative toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = OpenMP default)");

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "train a network and write a checkpoint");
    train_cmd->add_option("--preset", ta.preset, "paper-toy|paper-mnist|scaled-mnist");
    train_cmd->add_option("--decay", ta.decay, "on|off");
    train_cmd->add_option("--activation", ta.activation, "linear|tanh (overrides preset)");
    train_cmd->add_option("--layers", ta.layers, "comma-separated sizes (overrides preset)");
    train_cmd->add_option("--dataset", ta.dataset, "'toy' or an IDX directory");
    train_cmd->add_option("--out", ta.out, "output directory");
    train_cmd->add_option("--seed", ta.seed, "run seed");
    train_cmd->add_option("--epochs", ta.epochs, "override preset epochs");
    train_cmd->add_option("--train-limit", ta.train_limit, "cap training samples");
    train_cmd->add_option("--dt", ta.dt, "Euler step");
    train_cmd->add_option("--tol", ta.tol, "settle tolerance");
    train_cmd->add_option("--t-max", ta.t_max, "settle duration (simulated s)");
    train_cmd->add_option("--weight-dt", ta.weight_dt, "weight Euler step");

    std::string ev_ckpt, ev_dataset;
    bool ev_train_split = false;
    int ev_limit = 0;
    double ev_tol = -1.0, ev_tmax = -1.0;
    auto* eval_cmd = app.add_subcommand("eval", "discriminative accuracy of a checkpoint");
    eval_cmd->add_option("--checkpoint", ev_ckpt)->required();
    eval_cmd->add_option("--dataset", ev_dataset, "'toy' or an IDX directory");
    eval_cmd->add_flag("--train-split", ev_train_split, "use the training files");
    eval_cmd->add_option("--limit", ev_limit, "cap evaluated samples");
    eval_cmd->add_option("--tol", ev_tol);
    eval_cmd->add_option("--t-max", ev_tmax);

    std::string g_ckpt, g_classes, g_out = "generated";
    double g_lambda = -1.0, g_tmax = -1.0;
    auto* gen_cmd = app.add_subcommand("generate", "generate one sample per class");
    gen_cmd->add_option("--checkpoint", g_ckpt)->required();
    gen_cmd->add_option("--classes", g_classes, "comma-separated class list (default all)");
    gen_cmd->add_option("--out", g_out, "output directory");
    gen_cmd->add_option("--lambda-x", g_lambda, "override activity decay");
    gen_cmd->add_option("--t-max", g_tmax, "override settle duration");

    int tc_m = 10, tc_n = 5, tc_r = 3, tc_trials = 100;
    uint64_t tc_seed = 1;
    auto* tc_cmd = app.add_subcommand("theorem-check", "verify the min-norm construction");
    tc_cmd->add_option("--m", tc_m);
    tc_cmd->add_option("--n", tc_n);
    tc_cmd->add_option("--r", tc_r);
    tc_cmd->add_option("--trials", tc_trials);
    tc_cmd->add_option("--seed", tc_seed);

    uint64_t t1_seed = 1;
    int t1_trials = 10;
    std::string t1_out;
    auto* t1_cmd = app.add_subcommand("table1", "toy-task generative correlation table");
    t1_cmd->add_option("--seed", t1_seed);
    t1_cmd->add_option("--trials", t1_trials);
    t1_cmd->add_option("--out", t1_out, "directory for the CSV");

    std::string md_out = "data/digits";
    int md_train = 6000, md_test = 1000;
    uint64_t md_seed = 1;
    auto* md_cmd = app.add_subcommand("make-digits",
                                      "write a synthetic digit IDX dataset (MNIST stand-in)");
    md_cmd->add_option("--out", md_out);
    md_cmd->add_option("--train", md_train);
    md_cmd->add_option("--test", md_test);
    md_cmd->add_option("--seed", md_seed);

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (train_cmd->parsed()) return cmd_train(ta);
        if (eval_cmd->parsed())
            return cmd_eval(ev_ckpt, ev_dataset, ev_train_split, ev_limit, ev_tol, ev_tmax);
        if (gen_cmd->parsed()) return cmd_generate(g_ckpt, g_classes, g_out, g_lambda, g_tmax);
        if (tc_cmd->parsed()) return cmd_theorem_check(tc_m, tc_n, tc_r, tc_trials, tc_seed);
        if (t1_cmd->parsed()) return cmd_table1(t1_seed, t1_trials, t1_out);
        if (md_cmd->parsed()) {
            write_digit_dataset(md_out, md_train, md_test, md_seed);
            std::cout << "wrote IDX files under " << md_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

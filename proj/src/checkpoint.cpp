#include "pcgen/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "pcgen/errors.hpp"

namespace pcgen {

namespace {

constexpr const char* kTag = "PCGEN-CKPT";

static_assert(sizeof(double) == 8);

void write_doubles(std::ostream& os, const double* p, size_t n) {
    // payloads are little-endian float64; this build targets little-endian hosts
    os.write(reinterpret_cast<const char*>(p), static_cast<long>(n * sizeof(double)));
}

void read_doubles(std::istream& is, double* p, size_t n, const std::string& path) {
    is.read(reinterpret_cast<char*>(p), static_cast<long>(n * sizeof(double)));
    if (static_cast<size_t>(is.gcount()) != n * sizeof(double))
        throw DataError("truncated checkpoint payload: " + path);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
    return out;
}

} // namespace

std::string Checkpoint::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return v;
    return "";
}

PCNetwork Checkpoint::to_network() const {
    std::vector<LayerSpec> specs;
    for (int s : layer_sizes) specs.push_back({s, activation});
    PCNetwork net = PCNetwork::create(std::move(specs));
    net.nu = nu;
    net.M = M;
    net.W = W;
    net.check_shapes();
    return net;
}

Checkpoint Checkpoint::from_network(const PCNetwork& net) {
    net.check_shapes();
    Checkpoint c;
    for (const auto& l : net.layers) c.layer_sizes.push_back(l.size);
    c.activation = net.activation();
    c.nu = net.nu;
    c.M = net.M;
    c.W = net.W;
    return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    if (ckpt.version != 1) throw DataError("unsupported checkpoint version");
    if (ckpt.layer_sizes.size() < 2) throw DataError("checkpoint needs at least two layers");

    std::ostringstream header;
    header << kTag << " v" << ckpt.version << " layers=";
    for (size_t i = 0; i < ckpt.layer_sizes.size(); ++i)
        header << (i ? "," : "") << ckpt.layer_sizes[i];
    header << " act=" << to_string(ckpt.activation);
    header << " exemplars=" << ckpt.exemplars.size();
    for (const auto& [k, v] : ckpt.meta) header << ' ' << k << '=' << v;
    header << '\n';

    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open checkpoint for writing: " + path);
    const std::string h = header.str();
    f.write(h.data(), static_cast<long>(h.size()));

    const size_t n = ckpt.layer_sizes.size();
    if (ckpt.nu.size() != n) throw DataError("checkpoint nu size mismatch");
    write_doubles(f, ckpt.nu.data(), n);
    if (ckpt.M.size() != n - 1 || ckpt.W.size() != n - 1)
        throw DataError("checkpoint weight count mismatch");
    for (size_t i = 0; i + 1 < n; ++i) {
        const auto& m = ckpt.M[i];
        const auto& w = ckpt.W[i];
        if (m.rows != ckpt.layer_sizes[i + 1] || m.cols != ckpt.layer_sizes[i] ||
            w.rows != ckpt.layer_sizes[i] || w.cols != ckpt.layer_sizes[i + 1])
            throw DataError("checkpoint weight shape mismatch at gap " + std::to_string(i + 1));
        write_doubles(f, m.data.data(), m.size());
        write_doubles(f, w.data.data(), w.size());
    }
    for (const auto& e : ckpt.exemplars) {
        if (static_cast<int>(e.size()) != ckpt.layer_sizes.front())
            throw DataError("checkpoint exemplar dim mismatch");
        write_doubles(f, e.data(), e.size());
    }
    if (!f) throw DataError("failed while writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open checkpoint: " + path);
    std::string header;
    if (!std::getline(f, header)) throw DataError("missing checkpoint header: " + path);

    const auto toks = split_ws(header);
    if (toks.size() < 2 || toks[0] != kTag)
        throw DataError("not a pcgen checkpoint: " + path);
    if (toks[1] != "v1")
        throw DataError("unrecognized checkpoint version '" + toks[1] + "' in " + path);

    Checkpoint c;
    c.version = 1;
    size_t exemplar_count = 0;
    bool saw_layers = false, saw_act = false;
    for (size_t i = 2; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw DataError("malformed checkpoint header token '" + toks[i] + "' in " + path);
        const std::string key = toks[i].substr(0, eq);
        const std::string val = toks[i].substr(eq + 1);
        if (key == "layers") {
            c.layer_sizes = parse_int_list(val);
            saw_layers = true;
        } else if (key == "act") {
            c.activation = activation_from_string(val);
            saw_act = true;
        } else if (key == "exemplars") {
            exemplar_count = std::stoul(val);
        } else {
            c.meta.emplace_back(key, val);
        }
    }
    if (!saw_layers || !saw_act || c.layer_sizes.size() < 2)
        throw DataError("incomplete checkpoint header: " + path);

    const size_t n = c.layer_sizes.size();
    c.nu.resize(n);
    read_doubles(f, c.nu.data(), n, path);
    for (size_t i = 0; i + 1 < n; ++i) {
        Matrix m(c.layer_sizes[i + 1], c.layer_sizes[i]);
        Matrix w(c.layer_sizes[i], c.layer_sizes[i + 1]);
        read_doubles(f, m.data.data(), m.size(), path);
        read_doubles(f, w.data.data(), w.size(), path);
        c.M.push_back(std::move(m));
        c.W.push_back(std::move(w));
    }
    for (size_t e = 0; e < exemplar_count; ++e) {
        Vec v(c.layer_sizes.front());
        read_doubles(f, v.data(), v.size(), path);
        c.exemplars.push_back(std::move(v));
    }
    char extra;
    if (f.read(&extra, 1) && f.gcount() == 1)
        throw DataError("trailing bytes after checkpoint payload: " + path);
    return c;
}

} // namespace pcgen

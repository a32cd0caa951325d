#include "pcgen/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "pcgen/errors.hpp"
#include "pcgen/rng.hpp"

namespace pcgen {

namespace {

constexpr uint32_t kImageMagic = 0x00000803;
constexpr uint32_t kLabelMagic = 0x00000801;

void put_be32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_be32(const std::vector<uint8_t>& buf, size_t off, const std::string& path) {
    if (off + 4 > buf.size()) throw DataError("truncated IDX header: " + path);
    return (static_cast<uint32_t>(buf[off]) << 24) | (static_cast<uint32_t>(buf[off + 1]) << 16) |
           (static_cast<uint32_t>(buf[off + 2]) << 8) | static_cast<uint32_t>(buf[off + 3]);
}

// whole file, transparently gunzipped when it starts with 0x1f 0x8b
std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open file: " + path);
    std::vector<uint8_t> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) {
        gzFile gz = gzopen(path.c_str(), "rb");
        if (!gz) throw DataError("cannot reopen gzip file: " + path);
        std::vector<uint8_t> out;
        uint8_t chunk[1 << 16];
        int got;
        while ((got = gzread(gz, chunk, sizeof chunk)) > 0) out.insert(out.end(), chunk, chunk + got);
        const bool ok = got == 0;
        gzclose(gz);
        if (!ok) throw DataError("gzip decompression failed: " + path);
        return out;
    }
    return raw;
}

} // namespace

void Dataset::validate() const {
    if (inputs.size() != targets.size() || inputs.size() != labels.size())
        throw ConfigError("dataset: inputs/targets/labels must align");
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (static_cast<int>(inputs[i].size()) != meta.input_dim)
            throw ConfigError("dataset: input dim mismatch at sample " + std::to_string(i));
        if (static_cast<int>(targets[i].size()) != meta.n_classes)
            throw ConfigError("dataset: target dim mismatch at sample " + std::to_string(i));
        int ones = 0;
        for (double v : targets[i]) {
            if (v == 1.0)
                ++ones;
            else if (v != 0.0)
                throw ConfigError("dataset: target is not one-hot at sample " + std::to_string(i));
        }
        if (ones != 1) throw ConfigError("dataset: target is not one-hot at sample " + std::to_string(i));
        if (labels[i] < 0 || labels[i] >= meta.n_classes)
            throw ConfigError("dataset: label out of range at sample " + std::to_string(i));
    }
    for (const auto& e : exemplars)
        if (static_cast<int>(e.size()) != meta.input_dim)
            throw ConfigError("dataset: exemplar dim mismatch");
}

Dataset Dataset::subset(size_t first, size_t count) const {
    if (first + count > inputs.size()) throw ConfigError("dataset subset out of range");
    Dataset out;
    out.meta = meta;
    out.exemplars = exemplars;
    out.inputs.assign(inputs.begin() + first, inputs.begin() + first + count);
    out.targets.assign(targets.begin() + first, targets.begin() + first + count);
    out.labels.assign(labels.begin() + first, labels.begin() + first + count);
    return out;
}

Vec one_hot(int label, int n) {
    if (label < 0 || label >= n)
        throw std::domain_error("one_hot: label " + std::to_string(label) + " out of range [0," +
                                std::to_string(n) + ")");
    Vec v(n, 0.0);
    v[label] = 1.0;
    return v;
}

Dataset make_toy_dataset(uint64_t seed, int n_samples, double noise_sd, int n_classes, int dim) {
    if (n_samples < n_classes) throw ConfigError("toy dataset needs at least one sample per class");
    if (noise_sd < 0.0) throw ConfigError("noise_sd must be nonnegative");
    Rng rng(seed);
    Dataset d;
    d.meta.name = "toy";
    d.meta.input_dim = dim;
    d.meta.n_classes = n_classes;
    d.meta.normalization = "uniform exemplars on [-1,1]";
    for (int c = 0; c < n_classes; ++c) {
        Vec e(dim);
        for (auto& v : e) v = rng.uniform(-1.0, 1.0);
        d.exemplars.push_back(std::move(e));
    }
    for (int i = 0; i < n_samples; ++i) {
        const int c = i % n_classes; // round-robin keeps classes balanced
        Vec x = d.exemplars[c];
        for (auto& v : x) v += rng.gaussian(0.0, noise_sd);
        d.inputs.push_back(std::move(x));
        d.targets.push_back(one_hot(c, n_classes));
        d.labels.push_back(c);
    }
    return d;
}

IdxImages load_idx_images(const std::string& path) {
    const auto buf = read_file_bytes(path);
    if (get_be32(buf, 0, path) != kImageMagic)
        throw DataError("bad IDX image magic in " + path + " (expected 0x00000803)");
    IdxImages img;
    img.count = static_cast<int>(get_be32(buf, 4, path));
    img.rows = static_cast<int>(get_be32(buf, 8, path));
    img.cols = static_cast<int>(get_be32(buf, 12, path));
    const size_t need = 16 + static_cast<size_t>(img.count) * img.rows * img.cols;
    if (buf.size() < need)
        throw DataError("truncated IDX image payload in " + path + ": have " +
                        std::to_string(buf.size()) + " bytes, need " + std::to_string(need));
    img.pixels.assign(buf.begin() + 16, buf.begin() + static_cast<long>(need));
    return img;
}

std::vector<uint8_t> load_idx_labels(const std::string& path) {
    const auto buf = read_file_bytes(path);
    if (get_be32(buf, 0, path) != kLabelMagic)
        throw DataError("bad IDX label magic in " + path + " (expected 0x00000801)");
    const size_t count = get_be32(buf, 4, path);
    if (buf.size() < 8 + count)
        throw DataError("truncated IDX label payload in " + path);
    return {buf.begin() + 8, buf.begin() + 8 + static_cast<long>(count)};
}

void write_idx_images(const std::string& path, const IdxImages& images) {
    if (images.pixels.size() !=
        static_cast<size_t>(images.count) * images.rows * images.cols)
        throw DataError("write_idx_images: pixel payload does not match declared dims");
    std::vector<uint8_t> out;
    out.reserve(16 + images.pixels.size());
    put_be32(out, kImageMagic);
    put_be32(out, static_cast<uint32_t>(images.count));
    put_be32(out, static_cast<uint32_t>(images.rows));
    put_be32(out, static_cast<uint32_t>(images.cols));
    out.insert(out.end(), images.pixels.begin(), images.pixels.end());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<long>(out.size()));
    if (!f) throw DataError("failed while writing: " + path);
}

void write_idx_labels(const std::string& path, const std::vector<uint8_t>& labels) {
    std::vector<uint8_t> out;
    out.reserve(8 + labels.size());
    put_be32(out, kLabelMagic);
    put_be32(out, static_cast<uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<long>(out.size()));
    if (!f) throw DataError("failed while writing: " + path);
}

uint8_t unit_to_pixel(double v) {
    const double p = (v + 1.0) * 127.5;
    const double clamped = std::min(255.0, std::max(0.0, p));
    return static_cast<uint8_t>(std::llround(clamped));
}

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    const IdxImages img = load_idx_images(images_path);
    const std::vector<uint8_t> labels = load_idx_labels(labels_path);
    if (static_cast<size_t>(img.count) != labels.size())
        throw DataError("image/label count mismatch: " + std::to_string(img.count) +
                        " images vs " + std::to_string(labels.size()) + " labels");
    constexpr int n_classes = 10;
    const int dim = img.rows * img.cols;

    Dataset d;
    d.meta.name = "mnist";
    d.meta.input_dim = dim;
    d.meta.n_classes = n_classes;
    d.meta.image_rows = img.rows;
    d.meta.image_cols = img.cols;
    d.meta.normalization = "pixel/127.5 - 1";
    d.inputs.reserve(img.count);
    std::vector<Vec> class_sums(n_classes, Vec(dim, 0.0));
    std::vector<int> class_counts(n_classes, 0);
    for (int i = 0; i < img.count; ++i) {
        if (labels[i] >= n_classes)
            throw DataError("label out of range at sample " + std::to_string(i));
        Vec x(dim);
        const uint8_t* px = img.pixels.data() + static_cast<size_t>(i) * dim;
        for (int j = 0; j < dim; ++j) x[j] = pixel_to_unit(px[j]);
        for (int j = 0; j < dim; ++j) class_sums[labels[i]][j] += x[j];
        ++class_counts[labels[i]];
        d.inputs.push_back(std::move(x));
        d.targets.push_back(one_hot(labels[i], n_classes));
        d.labels.push_back(labels[i]);
    }
    // class means double as generative reference vectors
    for (int c = 0; c < n_classes; ++c) {
        Vec m(dim, 0.0);
        if (class_counts[c] > 0)
            for (int j = 0; j < dim; ++j) m[j] = class_sums[c][j] / class_counts[c];
        d.exemplars.push_back(std::move(m));
    }
    return d;
}

} // namespace pcgen

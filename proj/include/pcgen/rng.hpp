#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pcgen {

// Deterministic random source. The engine is std::mt19937_64 (fully specified
// by the standard) and every mapping to doubles is spelled out here, so a
// seed reproduces the same stream on any standard library:
//   uniform01: top 53 bits of the next engine output, scaled to [0,1)
//   gaussian:  Marsaglia polar method on uniform pairs
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian(double mean, double sd) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        have_spare_ = true;
        return mean + sd * u * scale;
    }

    // unbiased integer in [0, n) by rejection
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % n;
    }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace pcgen

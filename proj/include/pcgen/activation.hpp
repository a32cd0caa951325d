#pragma once

#include <cmath>
#include <string>

#include "pcgen/errors.hpp"

namespace pcgen {

enum class Activation { Linear, Tanh };

inline double activate(Activation a, double v) {
    return a == Activation::Tanh ? std::tanh(v) : v;
}

// derivative of the activation evaluated at pre-activation v
inline double activate_deriv(Activation a, double v) {
    if (a == Activation::Tanh) {
        const double t = std::tanh(v);
        return 1.0 - t * t;
    }
    return 1.0;
}

inline std::string to_string(Activation a) {
    return a == Activation::Tanh ? "tanh" : "linear";
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "linear") return Activation::Linear;
    throw ConfigError("unknown activation '" + s + "' (expected linear|tanh)");
}

} // namespace pcgen

#pragma once

#include <stdexcept>
#include <string>

namespace pcgen {

// Invalid shapes, invalid parameters, inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A non-finite value appeared during integration or a weight update.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, int layer)
        : std::runtime_error(msg), layer_(layer) {}
    int layer() const { return layer_; }

private:
    int layer_;
};

// Malformed or unreadable input/output files (IDX, checkpoints).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pcgen

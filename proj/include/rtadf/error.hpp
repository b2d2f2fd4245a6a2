#pragma once

#include <stdexcept>
#include <string>

namespace rtadf {

// Malformed input data: CSV contents, misaligned sequences, bad cache files.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration: window sizes, lag orders, flag combinations.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: degenerate regressions, statistic sets with no usable value.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rtadf

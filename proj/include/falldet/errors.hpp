#pragma once

#include <stdexcept>

namespace falldet {

// Error categories map onto the CLI exit-code contract:
// config/io -> 2, parse -> 3, training/evaluation -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace falldet

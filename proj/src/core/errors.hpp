#pragma once

#include <stdexcept>
#include <string>

namespace rgkit {

// Invalid user input: bad parameters, malformed config.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine could not meet its contract (tolerance not met,
// bracketing failed, rejection loop overran, step-size underflow).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
    double achieved = 0.0;  // achieved error estimate where applicable
};

inline NumericalError numerical_error(const std::string& msg, double achieved) {
    NumericalError e(msg);
    e.achieved = achieved;
    return e;
}

}  // namespace rgkit

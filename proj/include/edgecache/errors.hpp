#pragma once

#include <stdexcept>
#include <string>

namespace edgecache {

/// Invalid or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite parameters or gradients during training. The trainer catches
/// this, drops an emergency checkpoint and aborts the run.
struct TrainingFault : std::runtime_error {
    explicit TrainingFault(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate delay accounting (e.g. zero counterfactual delay): η undefined,
/// the run must abort rather than report a number.
struct AccountingError : std::runtime_error {
    explicit AccountingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edgecache

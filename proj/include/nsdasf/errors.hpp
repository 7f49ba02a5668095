#pragma once

#include <stdexcept>
#include <string>

namespace nsdasf {

// Bad dimensions, bad options, or an unsupported configuration.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a diverging iteration.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Missing, duplicate or stale messages during a round.
struct protocol_error : std::runtime_error {
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate input (zero matrix, coincident anchors, empty ledger).
struct degenerate_input_error : std::runtime_error {
    explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsdasf

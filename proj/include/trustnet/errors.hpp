#pragma once

#include <stdexcept>
#include <string>

namespace trustnet {

// Malformed input files (network files, histograms, configs). Carries a
// line number when one is known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")") {}
};

// Invalid or inconsistent parameters: bad config keys, mismatched
// recommender sets, out-of-range knobs.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The trust process has no selectable shop (all-zero trust with alpha = 0).
class StuckStateError : public std::runtime_error {
public:
    explicit StuckStateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failures that are data-dependent rather than programming errors:
// insufficient tail mass, degenerate fits, non-convergence.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace trustnet

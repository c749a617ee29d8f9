#pragma once

#include <stdexcept>
#include <string>

namespace coopgame {

// Invalid argument supplied by the caller (bad coalition, bad flag value, ...).
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Request would require enumerating more subsets than the exact routines allow.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed game file or unreadable input.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Exact-enumeration routines refuse games with more players than this.
inline constexpr int kMaxExactPlayers = 25;

inline void require_exact_capacity(int n, const char* where) {
    if (n > kMaxExactPlayers)
        throw capacity_error(std::string(where) + ": exact enumeration limited to " +
                             std::to_string(kMaxExactPlayers) + " players, got " + std::to_string(n));
}

}  // namespace coopgame

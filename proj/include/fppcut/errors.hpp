#pragma once

#include <stdexcept>
#include <string>

namespace fppcut {

// Bad user input: malformed JSON, inconsistent law parameters, missing seed.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// A mathematical identity that must hold exactly failed at runtime
// (duality gap, mass mismatch, floor violation).  Never caught and
// "handled": the run aborts.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& m) : std::logic_error(m) {}
};

// Problem size exceeds the configured resource budget.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& m) : std::runtime_error(m) {}
};

inline void invariant(bool ok, const std::string& msg) {
  if (!ok) throw InvariantError(msg);
}

} // namespace fppcut

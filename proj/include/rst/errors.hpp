#pragma once

#include <stdexcept>
#include <string>

namespace rst {

// Invalid user input (bad file, bad flag value, geometry that does not fit).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation failed to reach its tolerance.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A resource guard tripped (dense assembly too large, pair count too large).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InputError(msg);
}

} // namespace rst

#pragma once

#include <stdexcept>
#include <string>

namespace rgs {

// Thrown when an exhaustive scan would exceed its configured budget.
struct cap_exceeded : std::runtime_error {
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rgs

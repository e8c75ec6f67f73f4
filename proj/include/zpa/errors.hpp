#pragma once

#include <stdexcept>

namespace zpa {

// Malformed input: bad literals, incompatible rings, out-of-range indices.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A resource guard tripped: the requested level/grid is too large for an
// exhaustive computation under the configured limits.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zpa

#pragma once

#include <stdexcept>
#include <string>

namespace slicegx {

// Bad user input: invalid ids, malformed files, inconsistent shapes. CLI exit code 1.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input; the message carries location diagnostics.
struct parse_error : input_error {
    using input_error::input_error;
};

// A requested path does not exist inside the search region.
struct connectivity_error : input_error {
    using input_error::input_error;
};

// Contract violation inside the library (caller bug). CLI exit code 2.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace slicegx

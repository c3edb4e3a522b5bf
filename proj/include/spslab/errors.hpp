#ifndef SPSLAB_ERRORS_HPP
#define SPSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spslab {

// Bad arguments, malformed files, unusable parameters. CLI exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was exceeded (expansion size, slice dimension,
// combinatorial enumeration). CLI exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation's stated precondition does not hold for the given input.
// CLI exit code 4.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A state that the underlying theorems rule out; signals a fault in the
// input (e.g. "minimal identity" that is not one) or in this library.
// CLI exit code 4.
struct structural_error : std::runtime_error {
    explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spslab

#endif

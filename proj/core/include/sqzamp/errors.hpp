#ifndef SQZAMP_ERRORS_HPP
#define SQZAMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sqzamp {

// File/stream failures; the CLI maps these to exit code 2.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqzamp

#endif  // SQZAMP_ERRORS_HPP

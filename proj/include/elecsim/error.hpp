#pragma once

#include <stdexcept>
#include <string>

namespace elecsim {

/// Malformed or inconsistent user-supplied input (files, flags, configuration).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed request that could not be carried out.
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace elecsim

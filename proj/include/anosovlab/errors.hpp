#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Error categories map to CLI exit codes: input 1, numeric 2, io 3.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Element is elliptic/parabolic where a hyperbolic one is required.
struct NonHyperbolicError : NumericError {
  explicit NonHyperbolicError(const std::string& what) : NumericError(what) {}
};

// Top eigenvalue gap below the proximality threshold.
struct NotProximalError : NumericError {
  explicit NotProximalError(const std::string& what) : NumericError(what) {}
};

}  // namespace anosov

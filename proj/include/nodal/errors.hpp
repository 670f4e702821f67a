#pragma once
#include <stdexcept>
#include <string>

namespace nodal {

// Error taxonomy shared across modules; all map onto C-API error codes.
struct StripError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SaddleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nodal

#pragma once

#include <stdexcept>
#include <string>

namespace tw {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Mismatched grids or lengths.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WeightError : std::domain_error {
  using std::domain_error::domain_error;
};

// Data outside the admissible class (divergent weighted norm, negative samples, ...).
struct DataError : std::domain_error {
  using std::domain_error::domain_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tw

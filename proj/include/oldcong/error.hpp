#pragma once

#include <stdexcept>
#include <string>

namespace oldcong {

// Bad arguments from the caller: wrong sizes, non-prime moduli, B below the
// Sturm bound. Maps to CLI exit code 2.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or incomplete input data (JSON, schema, singular curve,
// missing modular degree). Maps to CLI exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The mathematics refuses the request: no newforms at the level, the vector
// is not new, the two congruence routes disagree. Maps to CLI exit code 1.
struct math_error : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace oldcong

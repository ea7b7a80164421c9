#pragma once

#include <stdexcept>
#include <string>

namespace qpdr {

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when a linear splitting the construction relies on is singular.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotImplementedError : std::logic_error {
  using std::logic_error::logic_error;
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qpdr

#pragma once

#include <stdexcept>
#include <string>

namespace rbc {

/// Malformed user input: expression syntax, unknown names, bad parameters.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical precondition failed (non-Hermitian input, loss of definiteness).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Expression evaluation hit a vanishing denominator.
class EvaluationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace rbc

#pragma once

#include <stdexcept>
#include <string>

namespace divstat {

// Shape or size disagreement between operands.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Distribution or function parameters outside their admissible range.
// Distinct from an out-of-support evaluation point, which yields -inf.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument of a special function at or beyond a pole.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix required to be positive definite is not.
class NotPositiveDefiniteError : public std::invalid_argument {
 public:
  explicit NotPositiveDefiniteError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Input violates a hard structural precondition (ordering, rank, ties).
class DegenerateInputError : public std::invalid_argument {
 public:
  explicit DegenerateInputError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Evaluation point violates a precondition of the support parameterization
// (e.g. unordered spectral input), as opposed to lying in a zero-density tail.
class SupportError : public std::invalid_argument {
 public:
  explicit SupportError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed configuration (suite files, CLI JSON schemas).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Sampler failed a runtime health check (e.g. MCMC chain frozen).
class DiagnosticsError : public std::runtime_error {
 public:
  explicit DiagnosticsError(const std::string& what) : std::runtime_error(what) {}
};

// A redundancy built into an algorithm disagreed with itself; indicates a bug
// or severe ill-conditioning, never a user error.
class InternalConsistencyError : public std::logic_error {
 public:
  explicit InternalConsistencyError(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace divstat

#pragma once

#include <stdexcept>
#include <string>

namespace exgraph {

// Size or index outside the admissible range (e.g. restriction to m > n).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed or mismatched arguments.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditioning data admits no consistent configuration.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A ratio whose denominator vanishes for the given rates.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace exgraph

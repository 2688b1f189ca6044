#pragma once

#include <stdexcept>
#include <string>

namespace mixeig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degenerate or inconsistent geometry (zero-area element, broken refinement).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Factorization failure or eigensolver non-convergence.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Quantity requires an analytic solution that is not known for this domain.
class MissingExactSolution : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixeig

#pragma once

#include <stdexcept>
#include <string>

namespace slcone {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (k > 1, gcd != 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quantity that is infinite at the requested point, e.g. K(1).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Adaptive integrator could not keep the step size above the floor.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// An internal identity failed by more than its tolerance (e.g. R_j^2 < -1e-12).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (CLI flags, manifests, grid shapes).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace slcone

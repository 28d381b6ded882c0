#pragma once

#include <stdexcept>
#include <string>

namespace quadreg {

// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// X^T X is not invertible over the rationals.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NotInPolytope : public Error {
 public:
  using Error::Error;
};

// Wolfe's min-norm-point iteration hit its cycle safeguard.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

// A requested size is outside the supported envelope (e.g. N! vertices).
class SizeLimit : public Error {
 public:
  using Error::Error;
};

class NotDoublyStochastic : public Error {
 public:
  using Error::Error;
};

class DeltaOutOfRange : public Error {
 public:
  using Error::Error;
};

// The exact path tracer could not select a face at a breakpoint.
class DegenerateEvent : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadreg

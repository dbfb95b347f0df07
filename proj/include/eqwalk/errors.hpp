#pragma once

#include <stdexcept>
#include <string>

namespace eqwalk {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A vertex is missing or sits on the wrong side of the bipartition.
class SideMismatchError : public Error {
  public:
    using Error::Error;
};

/// The vertex is s' or t' (or unknown) and has no star state.
class NotAWalkVertexError : public Error {
  public:
    using Error::Error;
};

/// Source and sink are not connected.
class NoFlowError : public Error {
  public:
    using Error::Error;
};

/// An argument is outside the operation's domain (nonpositive weight, n <= 0, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A linear solve did not reach the requested residual.
class NumericalFailureError : public Error {
  public:
    using Error::Error;
};

/// Operation defined only for odd depth / odd layer count.
class ParityError : public Error {
  public:
    using Error::Error;
};

class ConstraintViolationError : public Error {
  public:
    ConstraintViolationError(int layer, const std::string& what)
        : Error("layer " + std::to_string(layer) + ": " + what), layer_(layer) {}

    int layer() const { return layer_; }

  private:
    int layer_;
};

/// C_{n+1} != 1 where a balanced profile is required.
class UnbalancedWeightsError : public Error {
  public:
    using Error::Error;
};

/// Configuration-model sampling ran out of retries.
class SamplingFailureError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace eqwalk

#pragma once

#include <stdexcept>
#include <string>

namespace bco {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: mismatched dimensions, out-of-range parameters.
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// Iteration cap hit or a numerical routine failed to converge.
class NumericalFailure : public Error {
  public:
    using Error::Error;
};

/// A body or point set is not full-dimensional.
class DegenerateBody : public Error {
  public:
    DegenerateBody(const std::string& what, int rank, int dim)
        : Error(what), rank_(rank), dim_(dim) {}
    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] int dim() const { return dim_; }

  private:
    int rank_;
    int dim_;
};

class GridTooLarge : public Error {
  public:
    GridTooLarge(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    [[nodiscard]] double estimate() const { return estimate_; }

  private:
    double estimate_;
};

class Unsupported : public Error {
  public:
    using Error::Error;
};

/// No convex function fits the confidence bands of the data.
class InconsistentData : public Error {
  public:
    using Error::Error;
};

/// Query point outside the domain of a model.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A caller broke a documented precondition (e.g. loss outside [0,1]).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// An internal invariant failed; indicates a bug or a numerically hopeless input.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

/// Experiment or adversary specification rejected at validation time.
class SpecError : public Error {
  public:
    using Error::Error;
};

/// An output file or directory could not be written.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace bco

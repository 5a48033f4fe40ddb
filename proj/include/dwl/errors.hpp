#pragma once

#include <stdexcept>
#include <string>

namespace dwl {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user input was violated (bad parameters, inconsistent data).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature or extrapolation did not reach its tolerance within budget.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A value left the representable floating point range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A Picard iterate left the admissible tube around the data part.
class TubeViolation : public Error {
 public:
  TubeViolation(const std::string& what, std::string component, double x, double t, double excess)
      : Error(what), component_(std::move(component)), x_(x), t_(t), excess_(excess) {}
  const std::string& component() const { return component_; }
  double x() const { return x_; }
  double t() const { return t_; }
  double excess() const { return excess_; }

 private:
  std::string component_;
  double x_, t_, excess_;
};

/// Segment lengths of the continuation collapsed below the grid resolution.
class PicardStalled : public Error {
 public:
  PicardStalled(const std::string& what, double reached) : Error(what), reached_(reached) {}
  double reached() const { return reached_; }

 private:
  double reached_;
};

/// The fixed-point loop exhausted max_iter.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A time stepper detected runaway growth.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis that an experiment depends on failed along the trajectory.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// The comparison integrator could not shrink its step any further.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

/// A trajectory did not enter the requested region before the horizon ended.
class NotAttained : public Error {
 public:
  using Error::Error;
};

}  // namespace dwl

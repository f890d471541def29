#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace lrspin {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: invalid spin label, non-positive scales, mismatched sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : InvalidArgument("dimension mismatch: " + std::to_string(lhs) +
                        " vs " + std::to_string(rhs)) {}
};

class NotHermitian : public InvalidArgument {
 public:
  explicit NotHermitian(double defect)
      : InvalidArgument("generator is not Hermitian (defect " +
                        std::to_string(defect) + ")"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

// Errors tied to a particular evaluation time.
class TimedError : public Error {
 public:
  TimedError(const std::string& what, double t)
      : Error(what + " at t=" + format_time(t)), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  static std::string format_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", t);
    return buf;
  }
  double t_;
};

// Eq. for Omega_x divides by sin(phi); raised when the limit is not finite.
class SingularTrack : public TimedError {
 public:
  explicit SingularTrack(double t)
      : TimedError("singular track: -dtheta/sin(phi) has no finite limit", t) {}
};

class DomainError : public TimedError {
 public:
  DomainError(const std::string& what, double t) : TimedError(what, t) {}
};

class ZeroField : public TimedError {
 public:
  explicit ZeroField(double t) : TimedError("driving field vanishes", t) {}
};

class NegativeXField : public TimedError {
 public:
  explicit NegativeXField(double t)
      : TimedError("Omega_x < 0 is outside the theta_h convention", t) {}
};

class OutOfRange : public TimedError {
 public:
  OutOfRange(double t, double lo, double hi)
      : TimedError("query outside tabulated range [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]",
                   t) {}
};

class NoExactTrack : public InvalidArgument {
 public:
  NoExactTrack()
      : InvalidArgument("no exact invariant track for the lz protocol") {}
};

// Validation failure for tabulated (t, theta, phi) input. line is 1-based, 0
// when the problem is not attributable to one line.
class MalformedSamples : public Error {
 public:
  MalformedSamples(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonMonotonicSamples : public MalformedSamples {
 public:
  explicit NonMonotonicSamples(std::size_t line)
      : MalformedSamples("time column is not strictly increasing", line) {}
};

class WindowTooSmall : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Numerical method failed to deliver a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public SolverError {
 public:
  QuadratureError(double achieved, double requested)
      : SolverError(message(achieved, requested)), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  static std::string message(double achieved, double requested) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature did not converge: achieved error %.3g > %.3g",
                  achieved, requested);
    return buf;
  }

  double achieved_;
};

}  // namespace lrspin

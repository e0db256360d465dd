#ifndef BISCV_ERRORS_HPP
#define BISCV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biscv {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The integrand (or objective) produced NaN at `abscissa`.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

// Adaptive quadrature hit its subdivision cap before reaching the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

// A bisection bracket whose endpoints do not straddle the boundary.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Derivative requested where the density has a jump or kink.
class NonDifferentiableError : public std::domain_error {
 public:
  NonDifferentiableError(const std::string& what, double x) : std::domain_error(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A precondition of a composite analysis failed (e.g. the Fisher chain on a
// distribution that is not bi-s*-concave).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biscv

#endif  // BISCV_ERRORS_HPP

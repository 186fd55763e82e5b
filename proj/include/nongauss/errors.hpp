#pragma once

#include <stdexcept>
#include <string>

namespace nongauss {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or mismatched shapes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A Gaussian integral whose quadratic form is not positive definite, or a
// state that fails a physicality check.
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

class DivergentIntegral : public PhysicalityError {
 public:
  DivergentIntegral(const std::string& what, std::size_t term)
      : PhysicalityError(what), term_(term) {}
  std::size_t term() const noexcept { return term_; }

 private:
  std::size_t term_;
};

// Pointwise evaluation of a function that still carries delta factors.
class UnsupportedEvaluation : public Error {
 public:
  using Error::Error;
};

// Conditioning event with vanishing probability.
class DegeneratePostselection : public Error {
 public:
  using Error::Error;
};

// Fock truncation lost more weight than allowed.
class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

}  // namespace nongauss

#pragma once

#include <stdexcept>
#include <string>

namespace blochcert {

// Caller passed arguments that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point was evaluated outside the open domain of a weight or mapping.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A rational term 1/(1 - t_i t) of a Nevanlinna representation was hit at its pole.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative procedure hit its cap without meeting its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace blochcert

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace euler_lab {

/// A documented precondition on shapes, ranks or grids was broken by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Well-formed input that lies outside the admissible set (divergence, mean,
/// contraction radius, perturbative regime).
class RejectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Jacobian determinant of a map vanished on the grid.
class SingularMap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration hit its cap. Carries the per-iteration history (distances or
/// residual norms, whichever the solver monitors).
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace euler_lab

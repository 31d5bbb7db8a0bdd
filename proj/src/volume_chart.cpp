#include "euler_lab/volume_chart.hpp"

#include <cmath>
#include <string>

#include "euler_lab/kernels.hpp"
#include "euler_lab/matrix_field.hpp"

namespace euler_lab {
namespace {

// A = grad v + hess phi.
MatrixField strain(const SpectralField& v, const SpectralField& phi) {
  if (v.rank() != Rank::vector3 || phi.rank() != Rank::scalar)
    throw ContractViolation("chart: v must be a vector field and phi a scalar");
  if (!(v.grid() == phi.grid())) throw ContractViolation("chart: v and phi live on different grids");
  MatrixField a = gradient_matrix(v);
  const MatrixField h = hessian(phi);
  for (int e = 0; e < 9; ++e) a[e] += h[e];
  return a;
}

void check_admissible(const ChartProblem& p) {
  if (p.v.rank() != Rank::vector3) throw ContractViolation("chart: v must be a vector field");
  const double norm = sobolev_norm(p.v, p.s);
  const double scale = std::max(1.0, norm);
  if (sobolev_norm(divergence(p.v), p.s - 1.0) > 1e-10 * scale)
    throw RejectedInput("chart: v is not divergence-free");
  for (int c = 0; c < 3; ++c)
    if (std::abs(mean(p.v, c)) > 1e-10 * scale) throw RejectedInput("chart: v has nonzero mean");
  if (!(norm < p.radius))
    throw RejectedInput("chart: |v|_s = " + std::to_string(norm) + " outside contraction radius " +
                        std::to_string(p.radius));
  if (p.tol <= 0.0 || p.max_iter < 1) throw ContractViolation("chart: tol and max_iter must be positive");
}

}  // namespace

SpectralField determinant_residual(const SpectralField& v, const SpectralField& phi) {
  const bool herm = v.hermitian() && phi.hermitian();
  const MatrixField j = add_identity(strain(v, phi));
  CofactorData cof = cofactors(v.grid(), to_grid(j), herm);
  SpectralField r = std::move(cof.det);
  r.coeffs()[0] -= 1.0;
  return r;
}

SpectralField nonlinearity_P(const SpectralField& v, const SpectralField& phi) {
  const bool herm = v.hermitian() && phi.hermitian();
  const GridSpec& grid = v.grid();
  const MatrixGrid a = to_grid(strain(v, phi));
  kernels::MatIn in;
  for (int e = 0; e < 9; ++e) in[e] = a[e];

  std::vector<cplx> minors(grid.points());
  kernels::active::principal_minor_sum(in, minors);
  SpectralField p = dealiased_scalar(grid, minors, herm);
  p += cofactors(grid, a, herm).det;
  p *= -1.0;
  return p;
}

ChartSolution solve_phi(const ChartProblem& problem) {
  check_admissible(problem);
  const SpectralField& v = problem.v;

  ChartSolution sol;
  sol.phi = SpectralField(v.grid(), Rank::scalar, v.hermitian());
  bool converged = false;
  for (int it = 1; it <= problem.max_iter; ++it) {
    // The mean of P vanishes identically (null Lagrangian); drop its rounding.
    SpectralField next = laplace_inv(remove_mean(nonlinearity_P(v, sol.phi)));
    const double dist = sobolev_norm(next - sol.phi, problem.s + 1.0);
    sol.phi = std::move(next);
    sol.history.push_back(dist);
    sol.iterations = it;
    if (dist <= problem.tol) {
      converged = true;
      break;
    }
    if (!std::isfinite(dist)) break;
  }
  if (!converged)
    throw NonConvergence("chart: phi iteration did not converge in " + std::to_string(problem.max_iter) +
                             " iterations",
                         sol.history);

  sol.det_residual = max_abs_on_grid(determinant_residual(v, sol.phi));
  sol.map.d = v + gradient(sol.phi);
  return sol;
}

DisplacementMap chart_map(const ChartProblem& problem) { return solve_phi(problem).map; }

}  // namespace euler_lab

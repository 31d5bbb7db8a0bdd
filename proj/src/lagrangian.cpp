#include "euler_lab/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "euler_lab/fft.hpp"
#include "euler_lab/kernels.hpp"

namespace euler_lab {
namespace {

constexpr double kSingularDet = 1e-8;

void require_vector(const SpectralField& f, const char* what) {
  if (f.rank() != Rank::vector3) throw ContractViolation(what);
}

void require_solenoidal(const SpectralField& w0, double s) {
  const double scale = std::max(1.0, sobolev_norm(w0, s - 1.0));
  if (sobolev_norm(divergence(w0), s - 1.0) > 1e-10 * scale)
    throw RejectedInput("vorticity is not divergence-free");
  for (int c = 0; c < 3; ++c)
    if (std::abs(mean(w0, c)) > 1e-10 * scale) throw RejectedInput("vorticity has nonzero mean");
}

SpectralField dealiased_vector(const GridSpec& grid, const std::array<std::vector<cplx>, 3>& values,
                               bool hermitian) {
  SpectralField out(grid, Rank::vector3, hermitian);
  for (int c = 0; c < 3; ++c) fft::forward(grid, values[c], out.component(c));
  dealias_in_place(out);
  return out;
}

}  // namespace

JacobianBundle jacobian(const DisplacementMap& map) {
  require_vector(map.d, "jacobian: displacement must be a vector field");
  JacobianBundle b;
  b.grid = map.grid();
  b.hermitian = map.d.hermitian();
  b.J = add_identity(gradient_matrix(map.d));
  b.J_grid = to_grid(b.J);
  CofactorData cof = cofactors(b.grid, b.J_grid, b.hermitian);
  b.adj = std::move(cof.adj);
  b.adj_grid = std::move(cof.adj_grid);
  b.det = std::move(cof.det);
  b.det_grid = std::move(cof.det_grid);
  b.min_abs_det = std::abs(b.det_grid.front());
  for (const cplx& v : b.det_grid) b.min_abs_det = std::min(b.min_abs_det, std::abs(v));
  return b;
}

SpectralField pushforward_vorticity(const JacobianBundle& jac, const SpectralField& w0) {
  require_vector(w0, "pushforward_vorticity: vorticity must be a vector field");
  if (!(w0.grid() == jac.grid)) throw ContractViolation("pushforward_vorticity: grid mismatch");
  const GridValues w = to_grid(w0);
  std::array<std::vector<cplx>, 3> out;
  kernels::MatIn m;
  for (int e = 0; e < 9; ++e) m[e] = jac.J_grid[e];
  kernels::VecIn in;
  kernels::VecOut dst;
  for (int c = 0; c < 3; ++c) {
    out[c].resize(jac.grid.points());
    in[c] = w.component(c);
    dst[c] = out[c];
  }
  kernels::active::matvec(m, in, dst);
  return dealiased_vector(jac.grid, out, jac.hermitian && w0.hermitian());
}

SpectralField pushforward_vorticity(const DisplacementMap& map, const SpectralField& w0) {
  return pushforward_vorticity(jacobian(map), w0);
}

ConjugatedDerivatives conjugated_derivatives(const JacobianBundle& jac, const SpectralField& U) {
  require_vector(U, "conjugated operators need a vector field");
  if (!(U.grid() == jac.grid)) throw ContractViolation("conjugated operators: grid mismatch");
  if (jac.min_abs_det < kSingularDet)
    throw SingularMap("Jacobian determinant vanishes on the grid (min |det| = " +
                      std::to_string(jac.min_abs_det) + ")");
  const std::size_t np = jac.grid.points();
  const MatrixGrid grad_u = to_grid(gradient_matrix(U));
  kernels::MatIn g, a;
  for (int e = 0; e < 9; ++e) {
    g[e] = grad_u[e];
    a[e] = jac.adj_grid[e];
  }
  std::array<std::vector<cplx>, 3> curl_vals;
  kernels::VecOut curl_out;
  for (int c = 0; c < 3; ++c) {
    curl_vals[c].resize(np);
    curl_out[c] = curl_vals[c];
  }
  std::vector<cplx> div_vals(np);
  kernels::active::conjugated_contract(g, a, jac.det_grid, curl_out, div_vals);

  const bool herm = jac.hermitian && U.hermitian();
  return {dealiased_vector(jac.grid, curl_vals, herm), dealiased_scalar(jac.grid, div_vals, herm)};
}

SpectralField conjugated_curl(const DisplacementMap& map, const SpectralField& U) {
  return conjugated_derivatives(jacobian(map), U).curl;
}

SpectralField conjugated_div(const DisplacementMap& map, const SpectralField& U) {
  return conjugated_derivatives(jacobian(map), U).div;
}

double max_displacement_gradient(const DisplacementMap& map) {
  const MatrixGrid g = to_grid(gradient_matrix(map.d));
  double worst = 0.0;
  for (std::size_t p = 0; p < map.grid().points(); ++p) {
    double f2 = 0.0;
    for (int e = 0; e < 9; ++e) f2 += std::norm(g[e][p]);
    worst = std::max(worst, f2);
  }
  return std::sqrt(worst);
}

namespace {

// Dealiased pointwise product M U (or M^T U) of a grid matrix with a vector field.
SpectralField apply_matrix(const GridSpec& grid, const MatrixGrid& m, bool transpose, const GridValues& u,
                           bool hermitian) {
  kernels::MatIn mi;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) mi[3 * i + j] = transpose ? m[3 * j + i] : m[3 * i + j];
  std::array<std::vector<cplx>, 3> out;
  kernels::VecIn in;
  kernels::VecOut dst;
  for (int c = 0; c < 3; ++c) {
    out[c].resize(grid.points());
    in[c] = u.component(c);
    dst[c] = out[c];
  }
  kernels::active::matvec(mi, in, dst);
  return dealiased_vector(grid, out, hermitian);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

VelocitySolve solve_velocity(const DisplacementMap& map, const SpectralField& w0,
                             const VelocityOptions& options) {
  require_vector(map.d, "solve_velocity: displacement must be a vector field");
  require_vector(w0, "solve_velocity: vorticity must be a vector field");
  if (!(map.grid() == w0.grid())) throw ContractViolation("solve_velocity: grid mismatch");
  require_solenoidal(w0, options.s);
  const double grad = max_displacement_gradient(map);
  if (!(grad <= options.max_gradient))
    throw RejectedInput("solve_velocity: |grad d| = " + sci(grad) + " outside perturbative regime");

  const JacobianBundle jac = jacobian(map);
  if (jac.min_abs_det < kSingularDet)
    throw SingularMap("Jacobian determinant vanishes on the grid (min |det| = " + sci(jac.min_abs_det) + ")");
  const bool herm = map.d.hermitian() && w0.hermitian();

  VelocitySolve out;
  out.U = SpectralField(map.grid(), Rank::vector3, herm);
  for (int it = 0;; ++it) {
    const GridValues u = to_grid(out.U);
    const SpectralField r_curl = w0 - curl(apply_matrix(jac.grid, jac.J_grid, true, u, herm));
    const SpectralField r_div = -divergence(apply_matrix(jac.grid, jac.adj_grid, false, u, herm));
    out.residual_curl = sobolev_norm(r_curl, options.s - 1.0);
    out.residual_div = sobolev_norm(r_div, options.s - 1.0);
    out.iterations = it;
    out.history.push_back(std::max(out.residual_curl, out.residual_div));
    if (out.residual_curl <= options.tol && out.residual_div <= options.tol) return out;
    if (it >= options.max_iter || !std::isfinite(out.history.back())) break;
    out.U += curl_inv(r_curl, 1e-8, options.s);
    out.U += gradient(laplace_inv(r_div));
  }
  throw NonConvergence("solve_velocity: residuals " + sci(out.residual_curl) + ", " + sci(out.residual_div) +
                           " after " + std::to_string(out.iterations) + " corrections",
                       out.history);
}

std::pair<double, double> velocity_residuals(const DisplacementMap& map, const SpectralField& w0,
                                             const SpectralField& U, double s) {
  const JacobianBundle jac = jacobian(map);
  const bool herm = map.d.hermitian() && w0.hermitian() && U.hermitian();
  const GridValues u = to_grid(U);
  return {sobolev_norm(w0 - curl(apply_matrix(jac.grid, jac.J_grid, true, u, herm)), s - 1.0),
          sobolev_norm(divergence(apply_matrix(jac.grid, jac.adj_grid, false, u, herm)), s - 1.0)};
}

std::pair<double, double> conjugated_residuals(const DisplacementMap& map, const SpectralField& w0,
                                               const SpectralField& U, double s) {
  const JacobianBundle jac = jacobian(map);
  const ConjugatedDerivatives cd = conjugated_derivatives(jac, U);
  return {sobolev_norm(pushforward_vorticity(jac, w0) - cd.curl, s - 1.0), sobolev_norm(cd.div, s - 1.0)};
}

}  // namespace euler_lab

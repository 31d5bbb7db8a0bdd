#pragma once

#include <vector>

#include "euler_lab/displacement.hpp"
#include "euler_lab/matrix_field.hpp"

namespace euler_lab {

/// J = I + grad d with its adjugate and determinant, spectral and on the grid.
struct JacobianBundle {
  GridSpec grid;
  bool hermitian = true;
  MatrixField J;
  MatrixGrid J_grid;
  MatrixField adj;
  MatrixGrid adj_grid;
  SpectralField det;
  std::vector<cplx> det_grid;
  double min_abs_det = 0.0;
};

JacobianBundle jacobian(const DisplacementMap& map);

/// g'(x) w0(x), dealiased.
SpectralField pushforward_vorticity(const JacobianBundle& jac, const SpectralField& w0);
SpectralField pushforward_vorticity(const DisplacementMap& map, const SpectralField& w0);

/// The y-space curl and divergence of u = U o g^{-1}, pulled back to x:
///   curl_i = eps_ijk sum_m dU_k/dx_m (J^{-1})_mj,   div = sum_im dU_i/dx_m (J^{-1})_mi,
/// with J^{-1} = adj J / det J. Throws SingularMap if det J nearly vanishes.
struct ConjugatedDerivatives {
  SpectralField curl;
  SpectralField div;
};
ConjugatedDerivatives conjugated_derivatives(const JacobianBundle& jac, const SpectralField& U);
SpectralField conjugated_curl(const DisplacementMap& map, const SpectralField& U);
SpectralField conjugated_div(const DisplacementMap& map, const SpectralField& U);

/// Max over the grid of the Frobenius norm of grad d.
double max_displacement_gradient(const DisplacementMap& map);

struct VelocityOptions {
  double tol = 1e-10;     ///< on both residuals, H^{s-1}
  int max_iter = 200;
  double s = kDefaultSobolevIndex;
  double max_gradient = 0.5;  ///< perturbative regime bound on |grad d|
};

struct VelocitySolve {
  SpectralField U;            ///< u o g, zero mean
  double residual_curl = 0.0; ///< |w0 - curl(J^T U)|_{s-1}
  double residual_div = 0.0;  ///< |div(adj(J) U)|_{s-1}
  int iterations = 0;         ///< corrections applied
  std::vector<double> history;  ///< max of the two residuals before each correction
};

/// Velocity U = u o g of the flow whose vorticity is carried from w0 by g.
///
/// Solved in the det-free form curl(J^T U) = w0 (Cauchy invariant),
/// div(adj(J) U) = 0 (Piola), mean U = 0. Multiplying out by J / det J gives
/// conjugated_curl(U) = g' w0 / det J and conjugated_div(U) = 0; the
/// det-free form stays exactly compatible under dealiasing even when det J
/// drifts from 1. Residual correction preconditioned by curl_inv and
/// grad laplace_inv, starting from U = 0.
VelocitySolve solve_velocity(const DisplacementMap& map, const SpectralField& w0,
                             const VelocityOptions& options = {});

/// Recompute (residual_curl, residual_div) for a candidate U from scratch.
std::pair<double, double> velocity_residuals(const DisplacementMap& map, const SpectralField& w0,
                                             const SpectralField& U, double s = kDefaultSobolevIndex);

/// (|conjugated_curl(U) - g' w0|_{s-1}, |conjugated_div(U)|_{s-1}). Agrees with
/// velocity_residuals only where det J = 1; off that set g' w0 is not a
/// y-space curl and the first entry has a floor of order |det J - 1|.
std::pair<double, double> conjugated_residuals(const DisplacementMap& map, const SpectralField& w0,
                                               const SpectralField& U, double s = kDefaultSobolevIndex);

}  // namespace euler_lab

#pragma once

#include <vector>

#include "euler_lab/displacement.hpp"
#include "euler_lab/spectral_ops.hpp"

namespace euler_lab {

/// Input of the chart construction g_v = Id + v + grad(phi).
struct ChartProblem {
  SpectralField v;  ///< divergence-free, zero-mean displacement
  double s = kDefaultSobolevIndex;
  double tol = 1e-12;   ///< H^{s+1} distance between successive phi iterates
  int max_iter = 60;
  double radius = 0.2;  ///< contraction radius in H^s; larger |v|_s is rejected
};

struct ChartSolution {
  SpectralField phi;           ///< zero-mean gradient potential
  DisplacementMap map;         ///< v + grad(phi)
  double det_residual = 0.0;   ///< max over the grid of |det(I + grad map) - 1|
  int iterations = 0;
  std::vector<double> history; ///< successive-iterate distances
};

/// det(I + grad v + hess phi) - 1, dealiased.
SpectralField determinant_residual(const SpectralField& v, const SpectralField& phi);

/// P with det(I + A) - 1 = lap(phi) - P for div v = 0, A = grad v + hess phi;
/// i.e. P = -(sum of principal 2x2 minors of A + det A).
SpectralField nonlinearity_P(const SpectralField& v, const SpectralField& phi);

/// Fixed point phi = lap^{-1} P(v, phi). Throws RejectedInput for inadmissible
/// v and NonConvergence (with the distance history) when max_iter is reached.
ChartSolution solve_phi(const ChartProblem& problem);

/// v + grad(phi(v)).
DisplacementMap chart_map(const ChartProblem& problem);

}  // namespace euler_lab

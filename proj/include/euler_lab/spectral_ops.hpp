#pragma once

#include <array>
#include <span>
#include <vector>

#include "euler_lab/spectral_field.hpp"

namespace euler_lab {

/// Default Sobolev exponent; anything above 5/2 works for the 3-torus.
inline constexpr double kDefaultSobolevIndex = 2.6;

enum class DiffKind { grad, div, curl };

GridValues to_grid(const SpectralField& f);
SpectralField from_grid(const GridValues& values, bool hermitian);

/// Zero every mode with some |k_i| above the grid's dealias cutoff.
SpectralField dealias(SpectralField f);
void dealias_in_place(SpectralField& f);

/// d f_component / d x_axis as a scalar field.
SpectralField partial(const SpectralField& f, int component, int axis);

/// Exact spectral grad / div / curl. The Nyquist plane is differentiated to zero.
SpectralField differentiate(const SpectralField& f, DiffKind kind);
inline SpectralField gradient(const SpectralField& f) { return differentiate(f, DiffKind::grad); }
inline SpectralField divergence(const SpectralField& f) { return differentiate(f, DiffKind::div); }
inline SpectralField curl(const SpectralField& f) { return differentiate(f, DiffKind::curl); }

/// Biot-Savart inverse: u^(k) = i k x w^(k) / |k|^2, u^(0) = 0.
/// Rejects w whose divergence or mean exceeds `tol` in H^{s-1}
/// (relative to max(1, |w|_{s-1})).
SpectralField curl_inv(const SpectralField& w, double tol = 1e-10, double s = kDefaultSobolevIndex);

/// Inverse Laplacian on zero-mean scalars; the result has zero mean.
SpectralField laplace_inv(const SpectralField& r, double tol = 1e-10);

/// Leray projection onto divergence-free, zero-mean fields.
SpectralField project_div_free(const SpectralField& u);

/// (sum_k (1 + |k|^2)^s |f^(k)|^2)^{1/2}, summed over components.
double sobolev_norm(const SpectralField& f, double s);

/// Pseudo-spectral product with dealiasing. Scalar*scalar, scalar*vector or
/// componentwise vector*vector.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

/// Direct summation of sum_k f^(k) e^{i k.z} at complex points.
/// Result is laid out point-major: value(p, c) = result[p * components + c].
std::vector<cplx> eval_at_points(const SpectralField& f, std::span<const Point3> points);

cplx mean(const SpectralField& f, int component = 0);
SpectralField remove_mean(SpectralField f);

/// Largest |f^(k)| with some |k_i| > limit.
double max_amplitude_beyond(const SpectralField& f, int limit);

SpectralField component_of(const SpectralField& f, int c);
SpectralField stack(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2);

/// Max over grid points and components of |f(x)|.
double max_abs_on_grid(const SpectralField& f);

/// Max relative Hermitian defect max_k |f(-k) - conj f(k)| / max|f|.
double hermitian_defect(const SpectralField& f);

/// Fill a field by sampling a callable on the grid. The callable receives
/// physical coordinates and returns one value per component.
template <typename Fn>
SpectralField sample_on_grid(const GridSpec& grid, Rank rank, Fn&& fn, bool hermitian = true) {
  GridValues values(grid, static_cast<int>(rank));
  const std::size_t np = grid.points();
  for (int i1 = 0; i1 < grid.n; ++i1)
    for (int i2 = 0; i2 < grid.n; ++i2)
      for (int i3 = 0; i3 < grid.n; ++i3) {
        const auto x = grid_point(grid, i1, i2, i3);
        const std::size_t p = (static_cast<std::size_t>(i1) * grid.n + i2) * grid.n + i3;
        const auto v = fn(x[0], x[1], x[2]);
        for (int c = 0; c < static_cast<int>(rank); ++c) values.values[c * np + p] = v[c];
      }
  return from_grid(values, hermitian);
}

}  // namespace euler_lab

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "euler_lab/grid.hpp"

namespace euler_lab {

using cplx = std::complex<double>;

/// A (possibly complex) point of the complexified torus.
using Point3 = std::array<cplx, 3>;

enum class Rank : int { scalar = 1, vector3 = 3 };

/// Scalar or 3-vector field on T^3 held as Fourier amplitudes.
///
/// The coefficient of e^{i k.x} is stored at (component, i1, i2, i3) with the
/// last index fastest; see GridSpec for the index/wavenumber convention.
/// `hermitian` records that the field is real-valued in physical space. It is
/// metadata only: every operation accepts non-hermitian arrays.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const GridSpec& grid, Rank rank, bool hermitian = true);

  const GridSpec& grid() const noexcept { return grid_; }
  Rank rank() const noexcept { return rank_; }
  int components() const noexcept { return static_cast<int>(rank_); }
  bool hermitian() const noexcept { return hermitian_; }
  void set_hermitian(bool h) noexcept { hermitian_ = h; }
  bool empty() const noexcept { return coeffs_.empty(); }

  std::span<cplx> coeffs() noexcept { return coeffs_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::span<cplx> component(int c);
  std::span<const cplx> component(int c) const;

  cplx& at(int c, int i1, int i2, int i3) { return coeffs_[offset(c, i1, i2, i3)]; }
  const cplx& at(int c, int i1, int i2, int i3) const { return coeffs_[offset(c, i1, i2, i3)]; }

  /// Amplitude of wavevector (k1,k2,k3); each k_i must lie in [-n/2, n/2).
  cplx mode(int c, int k1, int k2, int k3) const;
  void set_mode(int c, int k1, int k2, int k3, cplx value);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx scale);

  /// Throws ContractViolation unless grid and rank match.
  void require_compatible(const SpectralField& other) const;

 private:
  std::size_t offset(int c, int i1, int i2, int i3) const noexcept {
    const auto n = static_cast<std::size_t>(grid_.n);
    return static_cast<std::size_t>(c) * grid_.points() +
           (static_cast<std::size_t>(i1) * n + static_cast<std::size_t>(i2)) * n +
           static_cast<std::size_t>(i3);
  }

  GridSpec grid_;
  Rank rank_ = Rank::scalar;
  bool hermitian_ = true;
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a);
SpectralField operator*(cplx scale, SpectralField f);
inline SpectralField operator*(SpectralField f, cplx scale) { return scale * std::move(f); }

/// Physical-space samples on the n^3 grid, same layout as SpectralField.
struct GridValues {
  GridSpec grid;
  int components = 1;
  std::vector<cplx> values;

  GridValues() = default;
  GridValues(const GridSpec& g, int comps) : grid(g), components(comps), values(g.points() * comps) {}

  std::span<cplx> component(int c) { return std::span<cplx>(values).subspan(c * grid.points(), grid.points()); }
  std::span<const cplx> component(int c) const {
    return std::span<const cplx>(values).subspan(c * grid.points(), grid.points());
  }
};

/// Physical coordinates of grid point (i1,i2,i3).
inline std::array<double, 3> grid_point(const GridSpec& g, int i1, int i2, int i3) {
  const double h = g.spacing();
  return {i1 * h, i2 * h, i3 * h};
}

}  // namespace euler_lab

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>

#include "euler_lab/errors.hpp"

namespace euler_lab {

/// Uniform n^3 grid on the torus [0, 2pi)^3.
///
/// Storage index i along an axis maps to the integer wavenumber
/// k = i for i < n/2 and k = i - n otherwise, so k lies in [-n/2, n/2).
struct GridSpec {
  int n = 16;
  double dealias_fraction = 2.0 / 3.0;

  std::size_t points() const noexcept {
    return static_cast<std::size_t>(n) * n * n;
  }

  int wavenumber(int index) const noexcept { return index < n / 2 ? index : index - n; }
  int index_of(int k) const noexcept { return k >= 0 ? k : k + n; }

  /// Largest retained |k_i| after dealiasing.
  int cutoff() const noexcept {
    return static_cast<int>(std::floor(dealias_fraction * n / 2.0 + 1e-9));
  }

  bool retained(int k1, int k2, int k3) const noexcept {
    const int c = cutoff();
    return std::abs(k1) <= c && std::abs(k2) <= c && std::abs(k3) <= c;
  }

  double spacing() const noexcept { return 2.0 * M_PI / n; }

  void validate() const {
    if (n < 8 || n % 2 != 0) throw RejectedInput("grid size n must be even and >= 8");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
      throw RejectedInput("dealias_fraction must lie in (0, 1]");
  }

  bool operator==(const GridSpec&) const = default;
};

}  // namespace euler_lab

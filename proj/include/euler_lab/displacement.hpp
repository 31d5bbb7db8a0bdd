#pragma once

#include "euler_lab/spectral_field.hpp"

namespace euler_lab {

/// g - Id for a near-identity map g of the torus; complex-valued once time
/// is complexified.
struct DisplacementMap {
  SpectralField d;

  static DisplacementMap identity(const GridSpec& grid) { return {SpectralField(grid, Rank::vector3)}; }
  const GridSpec& grid() const noexcept { return d.grid(); }
};

}  // namespace euler_lab

#pragma once

#include <filesystem>

#include "euler_lab/spectral_field.hpp"

namespace euler_lab {

/// Field snapshot on disk: `<stem>.bin` holds little-endian float64 pairs
/// (re, im) in index order (component, i1, i2, i3), k3 fastest; `<stem>.json`
/// holds {"n", "rank", "hermitian", "dealias_fraction"} with rank 1 or 3.
/// Returns the path of the .bin file.
std::filesystem::path write_snapshot(const std::filesystem::path& stem, const SpectralField& f);

/// Accepts either the stem or the .bin/.json path.
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace euler_lab

#pragma once

#include <span>

#include "euler_lab/spectral_field.hpp"

namespace euler_lab::fft {

/// Amplitudes from grid samples; carries the 1/n^3 factor.
/// `in` and `out` must not alias.
void forward(const GridSpec& grid, std::span<const cplx> in, std::span<cplx> out);

/// Grid samples from amplitudes (unnormalized synthesis). No aliasing allowed.
void backward(const GridSpec& grid, std::span<const cplx> in, std::span<cplx> out);

}  // namespace euler_lab::fft

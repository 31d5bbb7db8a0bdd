#pragma once

#include <array>
#include <vector>

#include "euler_lab/spectral_ops.hpp"

namespace euler_lab {

/// 3x3 field of scalars, entry (i,j) at 3*i + j.
using MatrixField = std::array<SpectralField, 9>;
/// Physical samples of a MatrixField.
using MatrixGrid = std::array<std::vector<cplx>, 9>;

/// (i,j) -> d v_i / d x_j.
MatrixField gradient_matrix(const SpectralField& v);

/// (i,j) -> d^2 phi / d x_i d x_j.
MatrixField hessian(const SpectralField& phi);

MatrixGrid to_grid(const MatrixField& m);

/// Adjust the constant mode by `shift` on the diagonal: m + shift * I.
MatrixField add_identity(MatrixField m, cplx shift = 1.0);

/// Cofactor data of a band-limited matrix field. Each 2x2 cofactor is formed
/// pointwise and dealiased once; the determinant is the first-row expansion
/// against the dealiased cofactors, dealiased again.
struct CofactorData {
  MatrixField adj;
  MatrixGrid adj_grid;
  SpectralField det;
  std::vector<cplx> det_grid;
};

CofactorData cofactors(const GridSpec& grid, const MatrixGrid& m, bool hermitian);

/// Dealiased spectral field from one block of pointwise values.
SpectralField dealiased_scalar(const GridSpec& grid, std::span<const cplx> values, bool hermitian);

}  // namespace euler_lab

#include "euler_lab/matrix_field.hpp"

#include "euler_lab/fft.hpp"
#include "euler_lab/kernels.hpp"

namespace euler_lab {

MatrixField gradient_matrix(const SpectralField& v) {
  if (v.rank() != Rank::vector3) throw ContractViolation("gradient_matrix needs a vector field");
  MatrixField m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[3 * i + j] = partial(v, i, j);
  return m;
}

MatrixField hessian(const SpectralField& phi) {
  if (phi.rank() != Rank::scalar) throw ContractViolation("hessian needs a scalar field");
  std::array<SpectralField, 3> first;
  for (int j = 0; j < 3; ++j) first[j] = partial(phi, 0, j);
  MatrixField m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[3 * i + j] = i <= j ? partial(first[j], 0, i) : m[3 * j + i];
  return m;
}

MatrixGrid to_grid(const MatrixField& m) {
  MatrixGrid out;
  for (int e = 0; e < 9; ++e) out[e] = std::move(to_grid(m[e]).values);
  return out;
}

MatrixField add_identity(MatrixField m, cplx shift) {
  for (int i = 0; i < 3; ++i) m[4 * i].coeffs()[0] += shift;
  return m;
}

SpectralField dealiased_scalar(const GridSpec& grid, std::span<const cplx> values, bool hermitian) {
  SpectralField f(grid, Rank::scalar, hermitian);
  fft::forward(grid, values, f.coeffs());
  dealias_in_place(f);
  return f;
}

CofactorData cofactors(const GridSpec& grid, const MatrixGrid& m, bool hermitian) {
  const std::size_t np = grid.points();
  kernels::MatIn in;
  for (int e = 0; e < 9; ++e) in[e] = m[e];

  MatrixGrid raw;
  kernels::MatOut raw_out;
  for (int e = 0; e < 9; ++e) {
    raw[e].resize(np);
    raw_out[e] = raw[e];
  }
  kernels::active::adjugate(in, raw_out);

  CofactorData out;
  kernels::MatIn adj_in;
  for (int e = 0; e < 9; ++e) {
    out.adj[e] = dealiased_scalar(grid, raw[e], hermitian);
    out.adj_grid[e].resize(np);
    fft::backward(grid, out.adj[e].coeffs(), out.adj_grid[e]);
    adj_in[e] = out.adj_grid[e];
  }
  std::vector<cplx> det_raw(np);
  kernels::active::determinant_from_adjugate(in, adj_in, det_raw);
  out.det = dealiased_scalar(grid, det_raw, hermitian);
  out.det_grid.resize(np);
  fft::backward(grid, out.det.coeffs(), out.det_grid);
  return out;
}

}  // namespace euler_lab

#pragma once

// Pointwise physical-space kernels. Every kernel exists twice: `serial` is the
// reference loop, `parallel` the OpenMP version of the same loop body. The
// solvers call `active`; tests hold the two to agreement.

#include <array>
#include <span>
#include <vector>

#include "euler_lab/spectral_field.hpp"

namespace euler_lab::kernels {

using In = std::span<const cplx>;
using Out = std::span<cplx>;
/// 3x3 matrix field, entry (i,j) at index 3*i + j.
using MatIn = std::array<In, 9>;
using MatOut = std::array<Out, 9>;
using VecIn = std::array<In, 3>;
using VecOut = std::array<Out, 3>;

/// Compact spectrum for off-grid evaluation: coefficients on the box
/// [-kmax, kmax]^3, k3 fastest, one block per component.
struct CompactSpectrum {
  int kmax = 0;
  int components = 1;
  std::vector<cplx> coeffs;

  int width() const noexcept { return 2 * kmax + 1; }
  std::size_t block() const noexcept {
    const auto w = static_cast<std::size_t>(width());
    return w * w * w;
  }
};

CompactSpectrum compact(const SpectralField& f);

#define EULER_LAB_KERNEL_DECLS                                                       \
  void product(In a, In b, Out out);                                                  \
  void axpy(cplx alpha, In x, Out y);                                                 \
  void adjugate(const MatIn& m, const MatOut& adj);                                   \
  void determinant_from_adjugate(const MatIn& m, const MatIn& adj, Out det);          \
  void principal_minor_sum(const MatIn& m, Out out);                                  \
  void matvec(const MatIn& m, const VecIn& w, const VecOut& out);                     \
  void conjugated_contract(const MatIn& grad_u, const MatIn& adj, In det,             \
                           const VecOut& curl_out, Out div_out);                      \
  void cross(const VecIn& a, const VecIn& b, const VecOut& out);                      \
  void evaluate(const CompactSpectrum& spectrum, std::span<const Point3> points,      \
                std::span<cplx> out);

namespace serial {
EULER_LAB_KERNEL_DECLS
}  // namespace serial

namespace parallel {
EULER_LAB_KERNEL_DECLS
}  // namespace parallel

#undef EULER_LAB_KERNEL_DECLS

#ifdef EULER_LAB_HAVE_OPENMP
namespace active = parallel;
#else
namespace active = serial;
#endif

}  // namespace euler_lab::kernels

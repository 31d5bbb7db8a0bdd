#include "euler_lab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace euler_lab::kernels {
namespace body {

inline void product(In a, In b, Out out, std::size_t p) { out[p] = a[p] * b[p]; }

inline void axpy(cplx alpha, In x, Out y, std::size_t p) { y[p] += alpha * x[p]; }

// adj(i,j) = cofactor(j,i).
inline void adjugate(const MatIn& m, const MatOut& adj, std::size_t p) {
  const cplx a = m[0][p], b = m[1][p], c = m[2][p];
  const cplx d = m[3][p], e = m[4][p], f = m[5][p];
  const cplx g = m[6][p], h = m[7][p], i = m[8][p];
  adj[0][p] = e * i - f * h;
  adj[1][p] = c * h - b * i;
  adj[2][p] = b * f - c * e;
  adj[3][p] = f * g - d * i;
  adj[4][p] = a * i - c * g;
  adj[5][p] = c * d - a * f;
  adj[6][p] = d * h - e * g;
  adj[7][p] = b * g - a * h;
  adj[8][p] = a * e - b * d;
}

// First-row expansion against the first column of the adjugate.
inline void determinant_from_adjugate(const MatIn& m, const MatIn& adj, Out det, std::size_t p) {
  det[p] = m[0][p] * adj[0][p] + m[1][p] * adj[3][p] + m[2][p] * adj[6][p];
}

inline void principal_minor_sum(const MatIn& m, Out out, std::size_t p) {
  out[p] = m[0][p] * m[4][p] - m[1][p] * m[3][p] + m[0][p] * m[8][p] - m[2][p] * m[6][p] +
           m[4][p] * m[8][p] - m[5][p] * m[7][p];
}

inline void matvec(const MatIn& m, const VecIn& w, const VecOut& out, std::size_t p) {
  const cplx w0 = w[0][p], w1 = w[1][p], w2 = w[2][p];
  for (int i = 0; i < 3; ++i) out[i][p] = m[3 * i][p] * w0 + m[3 * i + 1][p] * w1 + m[3 * i + 2][p] * w2;
}

// With D(k,j) = sum_m grad_u(k,m) adj(m,j) / det  (the y-gradient of u):
// curl_i = eps_ijk D(k,j), div = trace D.
inline void conjugated_contract(const MatIn& grad_u, const MatIn& adj, In det, const VecOut& curl_out,
                                Out div_out, std::size_t p) {
  cplx dy[9];
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      cplx acc = 0.0;
      for (int m = 0; m < 3; ++m) acc += grad_u[3 * k + m][p] * adj[3 * m + j][p];
      dy[3 * k + j] = acc;
    }
  const cplx inv = 1.0 / det[p];
  curl_out[0][p] = (dy[3 * 2 + 1] - dy[3 * 1 + 2]) * inv;
  curl_out[1][p] = (dy[3 * 0 + 2] - dy[3 * 2 + 0]) * inv;
  curl_out[2][p] = (dy[3 * 1 + 0] - dy[3 * 0 + 1]) * inv;
  div_out[p] = (dy[0] + dy[4] + dy[8]) * inv;
}

inline void cross(const VecIn& a, const VecIn& b, const VecOut& out, std::size_t p) {
  out[0][p] = a[1][p] * b[2][p] - a[2][p] * b[1][p];
  out[1][p] = a[2][p] * b[0][p] - a[0][p] * b[2][p];
  out[2][p] = a[0][p] * b[1][p] - a[1][p] * b[0][p];
}

// Separable direct summation over the compact box.
inline void evaluate(const CompactSpectrum& s, std::span<const Point3> points, std::span<cplx> out,
                     std::size_t p) {
  const int w = s.width();
  const int kmax = s.kmax;
  cplx e[3][64];
  const cplx i_unit{0.0, 1.0};
  for (int a = 0; a < 3; ++a)
    for (int k = -kmax; k <= kmax; ++k) e[a][k + kmax] = std::exp(i_unit * static_cast<double>(k) * points[p][a]);
  for (int c = 0; c < s.components; ++c) {
    const cplx* block = s.coeffs.data() + c * s.block();
    cplx total = 0.0;
    for (int k1 = 0; k1 < w; ++k1) {
      cplx s1 = 0.0;
      for (int k2 = 0; k2 < w; ++k2) {
        const cplx* row = block + (static_cast<std::size_t>(k1) * w + k2) * w;
        cplx s2 = 0.0;
        for (int k3 = 0; k3 < w; ++k3) s2 += row[k3] * e[2][k3];
        s1 += e[1][k2] * s2;
      }
      total += e[0][k1] * s1;
    }
    out[p * s.components + c] = total;
  }
}

}  // namespace body

CompactSpectrum compact(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const std::size_t np = g.points();
  int kmax = 0;
  for (int c = 0; c < f.components(); ++c) {
    std::size_t p = 0;
    for (int i1 = 0; i1 < g.n; ++i1)
      for (int i2 = 0; i2 < g.n; ++i2)
        for (int i3 = 0; i3 < g.n; ++i3, ++p)
          if (f.coeffs()[c * np + p] != cplx{})
            kmax = std::max({kmax, std::abs(g.wavenumber(i1)), std::abs(g.wavenumber(i2)),
                             std::abs(g.wavenumber(i3))});
  }
  CompactSpectrum s;
  s.kmax = kmax;
  s.components = f.components();
  const int w = s.width();
  s.coeffs.assign(s.block() * s.components, cplx{});
  for (int c = 0; c < f.components(); ++c) {
    std::size_t p = 0;
    for (int i1 = 0; i1 < g.n; ++i1)
      for (int i2 = 0; i2 < g.n; ++i2)
        for (int i3 = 0; i3 < g.n; ++i3, ++p) {
          const cplx v = f.coeffs()[c * np + p];
          if (v == cplx{}) continue;
          const int k1 = g.wavenumber(i1) + kmax, k2 = g.wavenumber(i2) + kmax, k3 = g.wavenumber(i3) + kmax;
          s.coeffs[c * s.block() + (static_cast<std::size_t>(k1) * w + k2) * w + k3] = v;
        }
  }
  return s;
}

#define EULER_LAB_SERIAL_LOOP(n, call) \
  for (std::size_t p = 0; p < (n); ++p) call

#ifdef EULER_LAB_HAVE_OPENMP
#define EULER_LAB_PARALLEL_LOOP(n, call)                        \
  _Pragma("omp parallel for schedule(static)")                  \
  for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(n); ++q) { \
    const auto p = static_cast<std::size_t>(q);                 \
    call;                                                       \
  }
#else
#define EULER_LAB_PARALLEL_LOOP(n, call) EULER_LAB_SERIAL_LOOP(n, call)
#endif

#define EULER_LAB_KERNEL_DEFS(LOOP)                                                          \
  void product(In a, In b, Out out) { LOOP(out.size(), body::product(a, b, out, p)); }        \
  void axpy(cplx alpha, In x, Out y) { LOOP(y.size(), body::axpy(alpha, x, y, p)); }          \
  void adjugate(const MatIn& m, const MatOut& adj) {                                          \
    LOOP(adj[0].size(), body::adjugate(m, adj, p));                                           \
  }                                                                                           \
  void determinant_from_adjugate(const MatIn& m, const MatIn& adj, Out det) {                 \
    LOOP(det.size(), body::determinant_from_adjugate(m, adj, det, p));                        \
  }                                                                                           \
  void principal_minor_sum(const MatIn& m, Out out) {                                        \
    LOOP(out.size(), body::principal_minor_sum(m, out, p));                                   \
  }                                                                                           \
  void matvec(const MatIn& m, const VecIn& w, const VecOut& out) {                            \
    LOOP(out[0].size(), body::matvec(m, w, out, p));                                          \
  }                                                                                           \
  void conjugated_contract(const MatIn& grad_u, const MatIn& adj, In det,                     \
                           const VecOut& curl_out, Out div_out) {                             \
    LOOP(div_out.size(), body::conjugated_contract(grad_u, adj, det, curl_out, div_out, p));  \
  }                                                                                           \
  void cross(const VecIn& a, const VecIn& b, const VecOut& out) {                             \
    LOOP(out[0].size(), body::cross(a, b, out, p));                                           \
  }                                                                                           \
  void evaluate(const CompactSpectrum& spectrum, std::span<const Point3> points,              \
                std::span<cplx> out) {                                                        \
    if (spectrum.kmax > 31) throw ContractViolation("evaluate: spectrum wider than 63 modes"); \
    if (out.size() != points.size() * static_cast<std::size_t>(spectrum.components))          \
      throw ContractViolation("evaluate: output size mismatch");                              \
    LOOP(points.size(), body::evaluate(spectrum, points, out, p));                            \
  }

namespace serial {
EULER_LAB_KERNEL_DEFS(EULER_LAB_SERIAL_LOOP)
}  // namespace serial

namespace parallel {
EULER_LAB_KERNEL_DEFS(EULER_LAB_PARALLEL_LOOP)
}  // namespace parallel

}  // namespace euler_lab::kernels

#include "euler_lab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

#include "euler_lab/fft.hpp"
#include "euler_lab/kernels.hpp"

namespace euler_lab {
namespace {

constexpr cplx kI{0.0, 1.0};

// Wavenumber used by first derivatives: the Nyquist index differentiates to zero.
int derivative_wavenumber(const GridSpec& g, int index) {
  return index == g.n / 2 ? 0 : g.wavenumber(index);
}

void require_rank(const SpectralField& f, Rank r, const char* what) {
  if (f.rank() != r) throw ContractViolation(what);
}

template <typename Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  std::size_t p = 0;
  for (int i1 = 0; i1 < g.n; ++i1)
    for (int i2 = 0; i2 < g.n; ++i2)
      for (int i3 = 0; i3 < g.n; ++i3, ++p) fn(p, i1, i2, i3);
}

}  // namespace

GridValues to_grid(const SpectralField& f) {
  GridValues out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) fft::backward(f.grid(), f.component(c), out.component(c));
  return out;
}

SpectralField from_grid(const GridValues& values, bool hermitian) {
  SpectralField f(values.grid, values.components == 1 ? Rank::scalar : Rank::vector3, hermitian);
  if (values.components != 1 && values.components != 3)
    throw ContractViolation("grid values must have 1 or 3 components");
  for (int c = 0; c < values.components; ++c) fft::forward(values.grid, values.component(c), f.component(c));
  return f;
}

void dealias_in_place(SpectralField& f) {
  const GridSpec& g = f.grid();
  const std::size_t np = g.points();
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    if (g.retained(g.wavenumber(i1), g.wavenumber(i2), g.wavenumber(i3))) return;
    for (int c = 0; c < f.components(); ++c) f.coeffs()[c * np + p] = 0.0;
  });
}

SpectralField dealias(SpectralField f) {
  dealias_in_place(f);
  return f;
}

SpectralField partial(const SpectralField& f, int component, int axis) {
  if (axis < 0 || axis > 2) throw ContractViolation("axis must be 0, 1 or 2");
  const GridSpec& g = f.grid();
  SpectralField out(g, Rank::scalar, f.hermitian());
  auto src = f.component(component);
  auto dst = out.component(0);
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    const int idx[3] = {i1, i2, i3};
    dst[p] = kI * static_cast<double>(derivative_wavenumber(g, idx[axis])) * src[p];
  });
  return out;
}

SpectralField differentiate(const SpectralField& f, DiffKind kind) {
  const GridSpec& g = f.grid();
  const std::size_t np = g.points();
  switch (kind) {
    case DiffKind::grad: {
      require_rank(f, Rank::scalar, "grad needs a scalar field");
      SpectralField out(g, Rank::vector3, f.hermitian());
      for (int a = 0; a < 3; ++a) {
        auto d = partial(f, 0, a);
        std::copy(d.coeffs().begin(), d.coeffs().end(), out.component(a).begin());
      }
      return out;
    }
    case DiffKind::div: {
      require_rank(f, Rank::vector3, "div needs a vector field");
      SpectralField out(g, Rank::scalar, f.hermitian());
      auto dst = out.component(0);
      for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
        const double k[3] = {double(derivative_wavenumber(g, i1)), double(derivative_wavenumber(g, i2)),
                             double(derivative_wavenumber(g, i3))};
        cplx acc = 0.0;
        for (int a = 0; a < 3; ++a) acc += k[a] * f.coeffs()[a * np + p];
        dst[p] = kI * acc;
      });
      return out;
    }
    case DiffKind::curl: {
      require_rank(f, Rank::vector3, "curl needs a vector field");
      SpectralField out(g, Rank::vector3, f.hermitian());
      auto src = f.coeffs();
      auto dst = out.coeffs();
      for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
        const double k[3] = {double(derivative_wavenumber(g, i1)), double(derivative_wavenumber(g, i2)),
                             double(derivative_wavenumber(g, i3))};
        const cplx u0 = src[p], u1 = src[np + p], u2 = src[2 * np + p];
        dst[p] = kI * (k[1] * u2 - k[2] * u1);
        dst[np + p] = kI * (k[2] * u0 - k[0] * u2);
        dst[2 * np + p] = kI * (k[0] * u1 - k[1] * u0);
      });
      return out;
    }
  }
  throw ContractViolation("unknown differential operator");
}

SpectralField curl_inv(const SpectralField& w, double tol, double s) {
  require_rank(w, Rank::vector3, "curl_inv needs a vector field");
  const double scale = std::max(1.0, sobolev_norm(w, s - 1.0));
  if (sobolev_norm(divergence(w), s - 1.0) > tol * scale)
    throw RejectedInput("curl_inv: vorticity is not divergence-free");
  for (int c = 0; c < 3; ++c)
    if (std::abs(mean(w, c)) > tol * scale) throw RejectedInput("curl_inv: vorticity has nonzero mean");

  const GridSpec& g = w.grid();
  const std::size_t np = g.points();
  SpectralField u(g, Rank::vector3, w.hermitian());
  auto src = w.coeffs();
  auto dst = u.coeffs();
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    const double k[3] = {double(derivative_wavenumber(g, i1)), double(derivative_wavenumber(g, i2)),
                         double(derivative_wavenumber(g, i3))};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    const cplx w0 = src[p], w1 = src[np + p], w2 = src[2 * np + p];
    dst[p] = kI * (k[1] * w2 - k[2] * w1) / k2;
    dst[np + p] = kI * (k[2] * w0 - k[0] * w2) / k2;
    dst[2 * np + p] = kI * (k[0] * w1 - k[1] * w0) / k2;
  });
  return u;
}

SpectralField laplace_inv(const SpectralField& r, double tol) {
  require_rank(r, Rank::scalar, "laplace_inv needs a scalar field");
  if (std::abs(mean(r)) > tol * std::max(1.0, sobolev_norm(r, 0.0)))
    throw RejectedInput("laplace_inv: right-hand side has nonzero mean");
  const GridSpec& g = r.grid();
  SpectralField out(g, Rank::scalar, r.hermitian());
  auto src = r.coeffs();
  auto dst = out.coeffs();
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    const double k1 = g.wavenumber(i1), k2 = g.wavenumber(i2), k3 = g.wavenumber(i3);
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    dst[p] = kk == 0.0 ? cplx{} : -src[p] / kk;
  });
  return out;
}

SpectralField project_div_free(const SpectralField& u) {
  require_rank(u, Rank::vector3, "project_div_free needs a vector field");
  const GridSpec& g = u.grid();
  const std::size_t np = g.points();
  SpectralField out = u;
  auto dst = out.coeffs();
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    if (p == 0) {
      dst[0] = dst[np] = dst[2 * np] = 0.0;
      return;
    }
    const double k[3] = {double(derivative_wavenumber(g, i1)), double(derivative_wavenumber(g, i2)),
                         double(derivative_wavenumber(g, i3))};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    const cplx kdotu = (k[0] * dst[p] + k[1] * dst[np + p] + k[2] * dst[2 * np + p]) / k2;
    for (int a = 0; a < 3; ++a) dst[a * np + p] -= k[a] * kdotu;
  });
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  const GridSpec& g = f.grid();
  const std::size_t np = g.points();
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    double m2 = 0.0;
    for (int c = 0; c < f.components(); ++c) m2 += std::norm(f.coeffs()[c * np + p]);
    if (m2 == 0.0) return;
    const double k1 = g.wavenumber(i1), k2 = g.wavenumber(i2), k3 = g.wavenumber(i3);
    acc += std::pow(1.0 + k1 * k1 + k2 * k2 + k3 * k3, s) * m2;
  });
  return std::sqrt(acc);
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw ContractViolation("multiply: fields live on different grids");
  const bool f_scalar = f.rank() == Rank::scalar;
  const bool g_scalar = g.rank() == Rank::scalar;
  const Rank out_rank = (f_scalar && g_scalar) ? Rank::scalar : Rank::vector3;
  const GridValues fv = to_grid(f);
  const GridValues gv = to_grid(g);
  GridValues prod(f.grid(), static_cast<int>(out_rank));
  for (int c = 0; c < prod.components; ++c)
    kernels::active::product(fv.component(f_scalar ? 0 : c), gv.component(g_scalar ? 0 : c), prod.component(c));
  SpectralField out = from_grid(prod, f.hermitian() && g.hermitian());
  dealias_in_place(out);
  return out;
}

std::vector<cplx> eval_at_points(const SpectralField& f, std::span<const Point3> points) {
  const kernels::CompactSpectrum spectrum = kernels::compact(f);
  std::vector<cplx> out(points.size() * static_cast<std::size_t>(f.components()));
  kernels::active::evaluate(spectrum, points, out);
  return out;
}

cplx mean(const SpectralField& f, int component) { return f.component(component)[0]; }

SpectralField remove_mean(SpectralField f) {
  for (int c = 0; c < f.components(); ++c) f.component(c)[0] = 0.0;
  return f;
}

double max_amplitude_beyond(const SpectralField& f, int limit) {
  const GridSpec& g = f.grid();
  const std::size_t np = g.points();
  double m = 0.0;
  for_each_mode(g, [&](std::size_t p, int i1, int i2, int i3) {
    if (std::abs(g.wavenumber(i1)) <= limit && std::abs(g.wavenumber(i2)) <= limit &&
        std::abs(g.wavenumber(i3)) <= limit)
      return;
    for (int c = 0; c < f.components(); ++c) m = std::max(m, std::abs(f.coeffs()[c * np + p]));
  });
  return m;
}

SpectralField component_of(const SpectralField& f, int c) {
  SpectralField out(f.grid(), Rank::scalar, f.hermitian());
  auto src = f.component(c);
  std::copy(src.begin(), src.end(), out.coeffs().begin());
  return out;
}

SpectralField stack(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2) {
  const SpectralField* parts[3] = {&f0, &f1, &f2};
  SpectralField out(f0.grid(), Rank::vector3, f0.hermitian() && f1.hermitian() && f2.hermitian());
  for (int c = 0; c < 3; ++c) {
    if (parts[c]->rank() != Rank::scalar || !(parts[c]->grid() == f0.grid()))
      throw ContractViolation("stack needs three scalar fields on one grid");
    std::copy(parts[c]->coeffs().begin(), parts[c]->coeffs().end(), out.component(c).begin());
  }
  return out;
}

double max_abs_on_grid(const SpectralField& f) {
  const GridValues v = to_grid(f);
  double m = 0.0;
  for (const auto& x : v.values) m = std::max(m, std::abs(x));
  return m;
}

double hermitian_defect(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  double scale = 0.0, defect = 0.0;
  for (const auto& c : f.coeffs()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const cplx a = f.at(c, i1, i2, i3);
          const cplx b = f.at(c, (n - i1) % n, (n - i2) % n, (n - i3) % n);
          defect = std::max(defect, std::abs(b - std::conj(a)));
        }
  return defect / scale;
}

}  // namespace euler_lab

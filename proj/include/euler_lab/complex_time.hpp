#pragma once

// Complex-time machinery for analytic ODEs dx/dt = f(x): RK4 along rays
// t = s e^{i theta}, Picard iteration on a disk via circle collocation, Cauchy
// extraction of Taylor coefficients, root-test radius estimates and loop
// (monodromy) checks. Generic over the state type so toy problems on
// std::valarray<complex> validate the same code the fluid state runs through.

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <valarray>
#include <vector>

#include "euler_lab/errors.hpp"

namespace euler_lab::complex_time {

using cplx = std::complex<double>;

/// Vector space over C with the operations the integrators use.
template <typename S>
concept ComplexVectorSpace = std::copy_constructible<S> && requires(const S& a, const S& b, cplx c) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { c * a } -> std::convertible_to<S>;
};

template <ComplexVectorSpace S>
struct AnalyticOde {
  std::function<S(const S&)> rhs;
  S x0;
  std::function<double(const S&)> norm;
};

struct Failure {
  std::string message;
  long index = -1;  ///< step, node or sample where evaluation failed
};

enum class SeriesSource { picard, circle };

inline const char* to_string(SeriesSource s) { return s == SeriesSource::picard ? "picard" : "circle"; }

template <ComplexVectorSpace S>
struct TaylorSeries {
  std::vector<S> coeffs;
  double rho = 0.0;
  SeriesSource source = SeriesSource::picard;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }

  S evaluate(cplx t) const {
    S acc = coeffs.back();
    for (int k = order() - 1; k >= 0; --k) acc = coeffs[k] + t * acc;
    return acc;
  }
};

template <ComplexVectorSpace S>
struct RayResult {
  double theta = 0.0;
  double rho = 0.0;
  int steps = 0;
  std::vector<S> states;  ///< x at s_j e^{i theta}, s_j = j rho / steps
  std::optional<Failure> failure;

  bool ok() const { return !failure.has_value(); }
  cplx time(std::size_t j) const { return std::polar(rho * static_cast<double>(j) / steps, theta); }
};

template <ComplexVectorSpace S>
struct PicardResult {
  TaylorSeries<S> series;
  std::vector<double> update_norms;  ///< sup over nodes of |x_{n+1} - x_n| per sweep
  std::vector<std::vector<double>> coefficient_changes;  ///< per sweep, |delta a_k|
  bool converged = false;
  std::optional<Failure> failure;
};

template <ComplexVectorSpace S>
struct MonodromyReport {
  double rho = 0.0;
  int steps = 0;
  double loop_error = std::numeric_limits<double>::quiet_NaN();
  S start;                 ///< x(rho) reached along the positive real ray
  std::vector<S> samples;  ///< x(rho e^{i theta_j}) at equispaced theta_j along the loop
  std::optional<Failure> failure;

  bool ok() const { return !failure.has_value(); }
};

struct RadiusEstimate {
  double radius = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool infinite = false;  ///< entire-looking or vanishing tail
  double slope = 0.0;     ///< of log|a_k| against k
  double slope_stderr = 0.0;
};

inline double euclidean_norm(const std::valarray<cplx>& x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  return std::sqrt(acc);
}

namespace detail {

template <ComplexVectorSpace S>
S zero_like(const S& x) {
  return cplx(0.0) * x;
}

/// Evaluate f and flag non-finite results, wrapping exceptions into Failure.
template <ComplexVectorSpace S>
std::optional<S> checked_eval(const AnalyticOde<S>& ode, const std::type_identity_t<S>& x, std::string& error) {
  try {
    S y = ode.rhs(x);
    if (!std::isfinite(ode.norm(y))) {
      error = "right-hand side returned a non-finite state";
      return std::nullopt;
    }
    return y;
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
}

/// Classical RK4 step for dx/dtau = scale(tau) f(x) with complex step h in tau.
template <ComplexVectorSpace S, typename Scale>
std::optional<S> rk4_step(const AnalyticOde<S>& ode, const S& x, double tau, double h, Scale&& scale,
                          std::string& error) {
  auto k1 = checked_eval(ode, x, error);
  if (!k1) return std::nullopt;
  const cplx s1 = scale(tau), s2 = scale(tau + 0.5 * h), s4 = scale(tau + h);
  auto k2 = checked_eval(ode, x + (0.5 * h * s1) * *k1, error);
  if (!k2) return std::nullopt;
  auto k3 = checked_eval(ode, x + (0.5 * h * s2) * *k2, error);
  if (!k3) return std::nullopt;
  auto k4 = checked_eval(ode, x + (h * s2) * *k3, error);
  if (!k4) return std::nullopt;
  S next = x + cplx(h / 6.0) * ((s1 * *k1 + (2.0 * s2) * *k2) + ((2.0 * s2) * *k3 + s4 * *k4));
  if (!std::isfinite(ode.norm(next))) {
    error = "state became non-finite";
    return std::nullopt;
  }
  return next;
}

}  // namespace detail

/// RK4 along t = s e^{i theta}, s in [0, rho], from x0.
template <ComplexVectorSpace S>
RayResult<S> ray_integrate(const AnalyticOde<S>& ode, double theta, double rho, int steps) {
  if (steps < 4) throw ContractViolation("ray_integrate: steps must be >= 4");
  RayResult<S> ray;
  ray.theta = theta;
  ray.rho = rho;
  ray.steps = steps;
  ray.states.reserve(static_cast<std::size_t>(steps) + 1);
  ray.states.push_back(ode.x0);
  const double h = rho / steps;
  const cplx dir = std::polar(1.0, theta);
  for (int j = 0; j < steps; ++j) {
    std::string error;
    auto next = detail::rk4_step(ode, ray.states.back(), j * h, h, [dir](double) { return dir; }, error);
    if (!next) {
      ray.failure = Failure{error, j};
      break;
    }
    ray.states.push_back(std::move(*next));
  }
  return ray;
}

/// Rays at several angles; independent, so they fan out across threads.
template <ComplexVectorSpace S>
std::vector<RayResult<S>> ray_fan(const AnalyticOde<S>& ode, const std::vector<double>& thetas, double rho,
                                  int steps) {
  std::vector<RayResult<S>> rays(thetas.size());
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < static_cast<long>(thetas.size()); ++j) rays[j] = ray_integrate(ode, thetas[j], rho, steps);
  return rays;
}

/// Cauchy coefficients a_k = rho^{-k} (1/M) sum_j x(t_j) e^{-2 pi i j k / M}
/// from M equispaced samples t_j = rho e^{2 pi i j / M}. Needs M >= 2K + 2.
template <ComplexVectorSpace S>
TaylorSeries<S> taylor_from_circle(const std::vector<S>& samples, double rho, int order) {
  const int m = static_cast<int>(samples.size());
  if (order < 0 || m < 2 * order + 2)
    throw ContractViolation("taylor_from_circle: need at least 2K+2 samples");
  TaylorSeries<S> series;
  series.rho = rho;
  series.source = SeriesSource::circle;
  for (int k = 0; k <= order; ++k) {
    S acc = detail::zero_like(samples.front());
    for (int j = 0; j < m; ++j)
      acc = acc + std::polar(1.0, -2.0 * std::numbers::pi * j * k / m) * samples[j];
    series.coeffs.push_back(cplx(std::pow(rho, -k) / m) * acc);
  }
  return series;
}

/// Picard iteration x_{n+1}(t) = x0 + int_0^t f(x_n(s)) ds on |t| <= rho with
/// iterates kept as degree-K polynomials. Each sweep samples f at M = 2K+2
/// nodes on the circle, recovers its coefficients by the discrete Fourier sum
/// and integrates termwise. With `freeze`, a_k is held fixed from sweep k on,
/// which is where the triangular Picard recursion settles it.
template <ComplexVectorSpace S>
PicardResult<S> picard_disk(const AnalyticOde<S>& ode, double rho, int order, double tol, int max_sweeps,
                            bool freeze = true) {
  if (!(rho > 0.0) || order < 1) throw ContractViolation("picard_disk: need rho > 0 and K >= 1");
  const int m = 2 * order + 2;
  std::vector<cplx> nodes(m);
  for (int j = 0; j < m; ++j) nodes[j] = std::polar(rho, 2.0 * std::numbers::pi * j / m);

  PicardResult<S> out;
  out.series.rho = rho;
  out.series.source = SeriesSource::picard;
  out.series.coeffs.assign(static_cast<std::size_t>(order) + 1, detail::zero_like(ode.x0));
  out.series.coeffs[0] = ode.x0;

  std::vector<S> values(m, ode.x0);
  for (int j = 0; j < m; ++j) values[j] = out.series.evaluate(nodes[j]);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    std::vector<std::optional<S>> f(m);
    std::vector<std::string> errors(m);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < m; ++j) f[j] = detail::checked_eval(ode, values[j], errors[j]);
    for (int j = 0; j < m; ++j)
      if (!f[j]) {
        out.failure = Failure{"node " + std::to_string(j) + ": " + errors[j], j};
        return out;
      }

    std::vector<S> next = out.series.coeffs;
    std::vector<double> changes(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 0; k < order; ++k) {
      if (freeze && k + 1 < sweep) continue;
      S acc = detail::zero_like(ode.x0);
      for (int j = 0; j < m; ++j)
        acc = acc + std::polar(1.0, -2.0 * std::numbers::pi * j * k / m) * *f[j];
      next[k + 1] = cplx(std::pow(rho, -k) / (m * (k + 1.0))) * acc;
      changes[k + 1] = ode.norm(next[k + 1] - out.series.coeffs[k + 1]);
    }
    out.series.coeffs = std::move(next);

    double update = 0.0;
    for (int j = 0; j < m; ++j) {
      S v = out.series.evaluate(nodes[j]);
      update = std::max(update, ode.norm(v - values[j]));
      values[j] = std::move(v);
    }
    out.update_norms.push_back(update);
    out.coefficient_changes.push_back(std::move(changes));
    if (!std::isfinite(update)) {
      out.failure = Failure{"Picard update became non-finite", sweep};
      return out;
    }
    if (update <= tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

/// Integrate once around |t| = rho from `start` at t = rho:
/// dx/dtheta = i rho e^{i theta} f(x), theta in [0, 2 pi].
template <ComplexVectorSpace S>
MonodromyReport<S> loop_integrate(const AnalyticOde<S>& ode, const S& start, double rho, int steps,
                                  int sample_count = 16) {
  if (steps < 4 || sample_count < 1) throw ContractViolation("loop_integrate: steps >= 4, samples >= 1");
  MonodromyReport<S> rep;
  rep.rho = rho;
  rep.steps = steps;
  rep.start = start;
  const double h = 2.0 * std::numbers::pi / steps;
  auto scale = [rho](double theta) { return cplx(0.0, 1.0) * std::polar(rho, theta); };
  S x = start;
  int next_sample = 0;
  for (int j = 0; j <= steps; ++j) {
    while (next_sample < sample_count && j == (next_sample * steps) / sample_count) {
      rep.samples.push_back(x);
      ++next_sample;
    }
    if (j == steps) break;
    std::string error;
    auto nx = detail::rk4_step(ode, x, j * h, h, scale, error);
    if (!nx) {
      rep.failure = Failure{"loop: " + error, j};
      return rep;
    }
    x = std::move(*nx);
  }
  rep.loop_error = ode.norm(x - start);
  return rep;
}

/// Ray to t = rho along theta = 0, then one loop around |t| = rho. A small
/// loop_error is evidence of single-valued holomorphy on the disk.
template <ComplexVectorSpace S>
MonodromyReport<S> monodromy_check(const AnalyticOde<S>& ode, double rho, int steps, int sample_count = 16) {
  RayResult<S> ray = ray_integrate(ode, 0.0, rho, steps);
  if (!ray.ok()) {
    MonodromyReport<S> rep;
    rep.rho = rho;
    rep.steps = steps;
    rep.start = ray.states.back();
    rep.failure = Failure{"ray: " + ray.failure->message, ray.failure->index};
    return rep;
  }
  return loop_integrate(ode, ray.states.back(), rho, steps, sample_count);
}

/// Root-test radius from the tail a_{tail_start..} of coefficient norms.
///
/// Norms at or below `noise_floor` count as zero. A vanishing tail, or a tail
/// whose consecutive ratios |a_k|/|a_{k+1}| grow strictly and by at least 50%
/// (superlinear log-decay), is reported as infinite. Otherwise log|a_k| is
/// fitted linearly in k; radius = exp(-slope) and the interval maps
/// slope -/+ 2 standard errors.
inline RadiusEstimate radius_estimate(const std::vector<double>& norms, int tail_start, double noise_floor = 0.0) {
  if (tail_start < 0 || static_cast<int>(norms.size()) < tail_start + 4)
    throw ContractViolation("radius_estimate: series shorter than tail_start + 4");
  std::vector<double> ks, ys;
  for (int k = tail_start; k < static_cast<int>(norms.size()); ++k)
    if (norms[k] > noise_floor && norms[k] > 0.0) {
      ks.push_back(k);
      ys.push_back(std::log(norms[k]));
    }
  RadiusEstimate est;
  auto mark_infinite = [&est] {
    est.infinite = true;
    est.radius = est.lower = est.upper = std::numeric_limits<double>::infinity();
    return est;
  };
  if (ks.size() < 2) return mark_infinite();

  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    if (ks[i + 1] == ks[i] + 1) ratios.push_back(std::exp(ys[i] - ys[i + 1]));
  if (ratios.size() >= 3) {
    bool increasing = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i) increasing = increasing && ratios[i + 1] > ratios[i];
    if (increasing && ratios.back() >= 1.5 * ratios.front()) return mark_infinite();
  }

  const double m = static_cast<double>(ks.size());
  double kbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    kbar += ks[i] / m;
    ybar += ys[i] / m;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxx += (ks[i] - kbar) * (ks[i] - kbar);
    sxy += (ks[i] - kbar) * (ys[i] - ybar);
  }
  est.slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double r = ys[i] - (ybar + est.slope * (ks[i] - kbar));
    sse += r * r;
  }
  est.slope_stderr = ks.size() > 2 ? std::sqrt(sse / (m - 2.0) / sxx) : 0.0;
  est.radius = std::exp(-est.slope);
  est.lower = std::exp(-est.slope - 2.0 * est.slope_stderr);
  est.upper = std::exp(-est.slope + 2.0 * est.slope_stderr);
  return est;
}

/// Cauchy coefficients in a complex parameter: samples `map(eps_j)` at
/// eps_j = r e^{2 pi i j / M} (concurrently) and extracts a_0..a_K.
template <ComplexVectorSpace S>
TaylorSeries<S> parameter_circle(const std::function<S(cplx)>& map, double r, int samples, int order) {
  if (samples < 2 * order + 2) throw ContractViolation("parameter_circle: need at least 2K+2 samples");
  std::vector<std::optional<S>> values(samples);
  std::vector<std::string> errors(samples);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < samples; ++j) {
    try {
      values[j] = map(std::polar(r, 2.0 * std::numbers::pi * j / samples));
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }
  std::vector<S> flat;
  for (int j = 0; j < samples; ++j) {
    if (!values[j]) throw NonConvergence("parameter sample " + std::to_string(j) + ": " + errors[j], {});
    flat.push_back(std::move(*values[j]));
  }
  return taylor_from_circle(flat, r, order);
}

/// max over k <= kmax of |a_k - b_k| / |a_k|, with `a` extracted at the larger
/// radius. Coefficients with |a_k| r^k below `floor` times the series scale
/// max_j |a_j| r^j are roundoff-level; for them the difference is measured as
/// |a_k - b_k| r^k / scale instead.
template <ComplexVectorSpace S>
double cross_radius_drift(const TaylorSeries<S>& a, const TaylorSeries<S>& b,
                          const std::function<double(const S&)>& norm, int kmax, double floor = 1e-12) {
  const int top = std::min({kmax, a.order(), b.order()});
  double scale = 0.0;
  for (int k = 0; k <= a.order(); ++k) scale = std::max(scale, norm(a.coeffs[k]) * std::pow(a.rho, k));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int k = 0; k <= top; ++k) {
    const double ak = norm(a.coeffs[k]);
    const double diff = norm(a.coeffs[k] - b.coeffs[k]);
    const double rk = std::pow(a.rho, k);
    worst = std::max(worst, ak * rk > floor * scale ? diff / ak : diff * rk / scale);
  }
  return worst;
}

template <ComplexVectorSpace S>
std::vector<double> coefficient_norms(const TaylorSeries<S>& series, const std::function<double(const S&)>& norm) {
  std::vector<double> out;
  out.reserve(series.coeffs.size());
  for (const S& a : series.coeffs) out.push_back(norm(a));
  return out;
}

}  // namespace euler_lab::complex_time

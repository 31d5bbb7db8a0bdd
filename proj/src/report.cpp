#include "euler_lab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

namespace euler_lab {

using nlohmann::json;
namespace ct = complex_time;

namespace {

// Coefficients with |a_k| rho^k below this fraction of the series scale on the
// circle are roundoff and are left out of radius fits.
constexpr double kSeriesNoise = 1e-12;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_json(const std::optional<double>& v) { return v ? finite_or_null(*v) : json(nullptr); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

double circle_scale(const std::vector<double>& norms, double rho) {
  double s = 0.0;
  for (std::size_t k = 0; k < norms.size(); ++k) s = std::max(s, norms[k] * std::pow(rho, static_cast<double>(k)));
  return s;
}

std::vector<double> drop_noise(std::vector<double> norms, double rho, double scale) {
  for (std::size_t k = 0; k < norms.size(); ++k)
    if (norms[k] * std::pow(rho, static_cast<double>(k)) <= kSeriesNoise * scale) norms[k] = 0.0;
  return norms;
}

std::optional<RadiusEstimate> fit_radius(const std::vector<double>& norms, double rho, double scale) {
  const int order = static_cast<int>(norms.size()) - 1;
  const int tail = std::min(order / 2, order + 1 - 4);
  if (tail < 0) return std::nullopt;
  return ct::radius_estimate(drop_noise(norms, rho, scale), tail);
}

std::string describe(const ct::Failure& f) { return f.message; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Stages shared by the fluid and toy reports.
template <typename S>
struct Core {
  ct::PicardResult<S> picard;
  std::vector<ct::RayResult<S>> rays;
  int loop_samples = 16;
  ct::MonodromyReport<S> loop;
};

template <typename S>
bool run_core(const ct::AnalyticOde<S>& ode, const FlowProblem& p, DiagnosticsReport& rep, Core<S>& core) {
  rep.rho = p.rho;
  rep.order = p.order;
  const int K = p.order;

  core.picard = ct::picard_disk(ode, p.rho, K, p.tol.picard, K + 4);
  rep.picard_updates = core.picard.update_norms;
  rep.picard_converged = core.picard.converged;
  rep.picard_monotone = !rep.picard_updates.empty();
  for (std::size_t i = 1; i < rep.picard_updates.size(); ++i)
    rep.picard_monotone = rep.picard_monotone && rep.picard_updates[i] < rep.picard_updates[i - 1];
  if (core.picard.failure) {
    rep.failures.push_back("picard: " + describe(*core.picard.failure));
    return false;
  }
  rep.coeff_norms = ct::coefficient_norms(core.picard.series, ode.norm);
  if (!core.picard.converged) {
    rep.failures.push_back("picard: no convergence in " + std::to_string(rep.picard_updates.size()) + " sweeps");
    rep.nonconvergence = true;
    return false;
  }
  rep.radius = fit_radius(rep.coeff_norms, p.rho, circle_scale(rep.coeff_norms, p.rho));

  // Enough rays to extract K coefficients from the circle.
  const int count = std::max(p.ray_count, 2 * K + 2);
  std::vector<double> thetas(count);
  for (int j = 0; j < count; ++j) thetas[j] = 2.0 * std::numbers::pi * j / count;
  core.rays = ct::ray_fan(ode, thetas, p.rho, p.ray_steps);
  for (const auto& ray : core.rays)
    if (!ray.ok()) {
      rep.failures.push_back("rays: theta = " + std::to_string(ray.theta) + ": " + describe(*ray.failure));
      return false;
    }
  double discrepancy = 0.0;
  for (const auto& ray : core.rays)
    discrepancy = std::max(discrepancy,
                           ode.norm(core.picard.series.evaluate(ray.time(ray.steps)) - ray.states.back()));
  rep.picard_ray_discrepancy = discrepancy;

  const S& start = core.rays.front().states.back();
  core.loop = ct::loop_integrate(ode, start, p.rho, p.loop_steps, core.loop_samples);
  if (!core.loop.ok()) {
    rep.failures.push_back("monodromy: " + describe(*core.loop.failure));
    return false;
  }
  rep.loop_error = core.loop.loop_error;
  const auto refined = ct::loop_integrate(ode, start, p.rho, 2 * p.loop_steps, core.loop_samples);
  if (!refined.ok()) {
    rep.failures.push_back("monodromy: " + describe(*refined.failure));
    return false;
  }
  rep.loop_error_refined = refined.loop_error;

  std::vector<S> outer, inner;
  for (const auto& ray : core.rays) {
    outer.push_back(ray.states.back());
    inner.push_back(ray.states[ray.steps / 2]);
  }
  const auto a = ct::taylor_from_circle(outer, p.rho, K);
  const auto b = ct::taylor_from_circle(inner, p.rho / 2.0, K);
  rep.cross_radius_drift = ct::cross_radius_drift(a, b, ode.norm, K / 2);
  return true;
}

}  // namespace

json to_json(const RadiusEstimate& r) {
  return {{"radius", finite_or_null(r.radius)},
          {"lower", finite_or_null(r.lower)},
          {"upper", finite_or_null(r.upper)},
          {"infinite", r.infinite},
          {"slope", finite_or_null(r.slope)},
          {"slope_stderr", finite_or_null(r.slope_stderr)}};
}

json series_json(double rho, int order, const std::vector<double>& coeff_norms, const char* source) {
  json norms = json::array();
  for (double v : coeff_norms) norms.push_back(finite_or_null(v));
  return {{"rho", rho}, {"order", order}, {"coeff_norms", norms}, {"source", source}};
}

json DiagnosticsReport::to_json() const {
  json parts = json::array();
  for (const auto& ps : particles) {
    json x0 = json::array();
    for (const cplx& c : ps.x0) x0.push_back(c.real());
    json norms = json::array();
    for (double v : ps.coeff_norms) norms.push_back(finite_or_null(v));
    parts.push_back({{"id", ps.id}, {"x0", x0}, {"coeff_norms", norms}, {"radius", euler_lab::to_json(ps.radius)}});
  }
  json updates = json::array();
  for (double v : picard_updates) updates.push_back(finite_or_null(v));
  json norms = json::array();
  for (double v : coeff_norms) norms.push_back(finite_or_null(v));
  return {
      {"mode", mode},
      {"rho", rho},
      {"order", order},
      {"coeff_norms", norms},
      {"radius", radius ? euler_lab::to_json(*radius) : json(nullptr)},
      {"picard", {{"converged", picard_converged}, {"monotone", picard_monotone}, {"update_norms", updates}}},
      {"picard_ray_discrepancy", optional_json(picard_ray_discrepancy)},
      {"monodromy", {{"loop_error", optional_json(loop_error)}, {"loop_error_refined", optional_json(loop_error_refined)}}},
      {"cross_radius_drift", optional_json(cross_radius_drift)},
      {"energy_drift", optional_json(energy_drift)},
      {"determinant_drift", optional_json(determinant_drift)},
      {"oracle_velocity_discrepancy", optional_json(oracle_velocity_discrepancy)},
      {"particles", parts},
      {"failures", failures},
      {"ok", ok()},
      {"seconds", seconds},
  };
}

void write_trajectories_csv(const std::filesystem::path& path, const std::vector<TrajectoryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "t_re,t_im,particle_id,x1_re,x1_im,x2_re,x2_im,x3_re,x3_im\n";
  for (const auto& r : rows) {
    out << r.t.real() << ',' << r.t.imag() << ',' << r.particle;
    for (const cplx& c : r.x) out << ',' << c.real() << ',' << c.imag();
    out << '\n';
  }
}

DiagnosticsReport analyticity_report(const FlowProblem& p) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  const SpectralField u0 = initial_velocity(p);
  const SpectralField w0 = curl(u0);
  const VelocityOptions vel = velocity_options(p);
  const auto ode = lagrangian_ode(w0, vel);

  DiagnosticsReport rep;
  Core<SpectralField> core;
  try {
    if (!run_core(ode, p, rep, core)) {
      rep.seconds = seconds_since(t0);
      return rep;
    }
  } catch (const NonConvergence& e) {
    rep.failures.push_back(std::string("core: ") + e.what());
    rep.nonconvergence = true;
    rep.seconds = seconds_since(t0);
    return rep;
  }

  // Tracked particles: position series from the Picard coefficients of d.
  const std::vector<Point3> particles = default_particles(p.seed, p.random_particles);
  const auto& coeffs = core.picard.series.coeffs;
  std::vector<std::vector<cplx>> at_points;
  for (const auto& a : coeffs) at_points.push_back(eval_at_points(a, particles));
  const double field_scale = circle_scale(rep.coeff_norms, p.rho);
  for (std::size_t q = 0; q < particles.size(); ++q) {
    ParticleSeries ps;
    ps.id = static_cast<int>(q);
    ps.x0 = particles[q];
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      double n2 = 0.0;
      for (int c = 0; c < 3; ++c) n2 += std::norm(at_points[k][3 * q + c] + (k == 0 ? particles[q][c] : 0.0));
      ps.coeff_norms.push_back(std::sqrt(n2));
    }
    // Position and field coefficients share the scale of d on the circle.
    std::vector<double> moving = ps.coeff_norms;
    moving[0] = 0.0;
    if (auto r = fit_radius(moving, p.rho, field_scale)) ps.radius = *r;
    rep.particles.push_back(std::move(ps));
  }

  // Particle positions along the real ray, around the loop, and at the ray ends.
  auto emit = [&](cplx t, const SpectralField& d) {
    const auto pos = track(DisplacementMap{d}, particles);
    for (std::size_t q = 0; q < particles.size(); ++q) rep.trajectories.push_back({t, static_cast<int>(q), pos[q]});
  };
  const auto& real_ray = core.rays.front();
  const int stride = std::max(1, real_ray.steps / 10);
  for (int j = 0; j <= real_ray.steps; j += stride) emit(real_ray.time(j), real_ray.states[j]);
  for (std::size_t j = 0; j < core.loop.samples.size(); ++j)
    emit(std::polar(p.rho, 2.0 * std::numbers::pi * j / core.loop.samples.size()), core.loop.samples[j]);
  for (std::size_t r = 1; r < core.rays.size(); ++r) emit(core.rays[r].time(core.rays[r].steps), core.rays[r].states.back());

  // Real-axis checks on [0, rho].
  try {
    double e0 = 0.0, energy = 0.0, det = 0.0;
    for (int j = 0; j <= real_ray.steps; j += stride) {
      const DisplacementMap map{real_ray.states[j]};
      const SpectralField U = solve_velocity(map, w0, vel).U;
      const double e = lagrangian_energy(map, U);
      if (j == 0) e0 = e;
      if (e0 != 0.0) energy = std::max(energy, std::abs(e - e0) / e0);
      for (const cplx& v : jacobian(map).det_grid) det = std::max(det, std::abs(v - 1.0));
    }
    rep.energy_drift = energy;
    rep.determinant_drift = det;

    const DisplacementMap end{real_ray.states.back()};
    const SpectralField U = solve_velocity(end, w0, vel).U;
    const EulerReference ref = euler_reference_evolve(u0, p.rho, p.rho / 20.0);
    if (ref.failure) throw NonConvergence(*ref.failure, {});
    const std::vector<cplx> ue = eval_at_points(ref.u, mapped_grid_points(end));
    const GridValues ul = to_grid(U);
    const std::size_t np = p.grid.points();
    double worst = 0.0;
    for (std::size_t q = 0; q < np; ++q)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(ue[3 * q + c] - ul.values[c * np + q]));
    rep.oracle_velocity_discrepancy = worst;
  } catch (const NonConvergence& e) {
    rep.failures.push_back(std::string("real axis: ") + e.what());
    rep.nonconvergence = true;
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

DiagnosticsReport toy_report(const FlowProblem& p) {
  const auto t0 = std::chrono::steady_clock::now();
  using V = std::valarray<cplx>;
  ct::AnalyticOde<V> ode{[](const V& x) -> V { return x * x; }, V{cplx(1.0)}, ct::euclidean_norm};
  DiagnosticsReport rep;
  rep.mode = "toy";
  Core<V> core;
  if (run_core(ode, p, rep, core)) {
    auto emit = [&](cplx t, const V& x) { rep.trajectories.push_back({t, 0, {x[0], 0.0, 0.0}}); };
    const auto& real_ray = core.rays.front();
    for (int j = 0; j <= real_ray.steps; j += std::max(1, real_ray.steps / 10)) emit(real_ray.time(j), real_ray.states[j]);
    for (std::size_t j = 0; j < core.loop.samples.size(); ++j)
      emit(std::polar(p.rho, 2.0 * std::numbers::pi * j / core.loop.samples.size()), core.loop.samples[j]);
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

json ProbeReport::to_json() const {
  auto arr = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(finite_or_null(x));
    return a;
  };
  json coeffs = json::array();
  for (const cplx& c : coefficients) coeffs.push_back(complex_json(c));
  return {{"mode", mode},
          {"eps_radius", eps_radius},
          {"order", order},
          {"samples", samples},
          {"coeff_norms", arr(coeff_norms)},
          {"coeff_norms_half", arr(coeff_norms_half)},
          {"coefficients", coeffs},
          {"drift", optional_json(drift)},
          {"failures", failures},
          {"ok", ok()},
          {"seconds", seconds}};
}

ProbeReport parameter_analyticity_probe(const SpectralField& v, const SpectralField& w, const FlowProblem& p) {
  const auto t0 = std::chrono::steady_clock::now();
  ProbeReport rep;
  rep.eps_radius = p.eps_radius;
  rep.order = p.probe_order;
  rep.samples = p.probe_samples;
  const VelocityOptions vel = velocity_options(p);
  const double dt = p.dt;
  const std::function<SpectralField(cplx)> map = [&](cplx eps) { return exp_map(v + eps * w, dt, vel).d; };
  const std::function<double(const SpectralField&)> norm = [s = p.s](const SpectralField& f) {
    return sobolev_norm(f, s);
  };
  try {
    const auto outer = ct::parameter_circle(map, p.eps_radius, p.probe_samples, p.probe_order);
    const auto inner = ct::parameter_circle(map, p.eps_radius / 2.0, p.probe_samples, p.probe_order);
    rep.coeff_norms = ct::coefficient_norms(outer, norm);
    rep.coeff_norms_half = ct::coefficient_norms(inner, norm);
    rep.drift = ct::cross_radius_drift(outer, inner, norm, p.probe_order / 2);
  } catch (const NonConvergence& e) {
    rep.failures.push_back(std::string("probe: ") + e.what());
    rep.nonconvergence = true;
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

ProbeReport surrogate_probe(double eps_radius, int order, int samples, int steps) {
  const auto t0 = std::chrono::steady_clock::now();
  using V = std::valarray<cplx>;
  ProbeReport rep;
  rep.mode = "surrogate";
  rep.eps_radius = eps_radius;
  rep.order = order;
  rep.samples = samples;
  const std::function<V(cplx)> map = [steps](cplx y) {
    ct::AnalyticOde<V> ode{[y](const V& x) -> V { return y * x; }, V{cplx(1.0)}, ct::euclidean_norm};
    auto ray = ct::ray_integrate(ode, 0.0, 1.0, steps);
    return ray.states.back();
  };
  const std::function<double(const V&)> norm = ct::euclidean_norm;
  const auto outer = ct::parameter_circle(map, eps_radius, samples, order);
  const auto inner = ct::parameter_circle(map, eps_radius / 2.0, samples, order);
  rep.coeff_norms = ct::coefficient_norms(outer, norm);
  rep.coeff_norms_half = ct::coefficient_norms(inner, norm);
  for (const V& a : outer.coeffs) rep.coefficients.push_back(a[0]);
  rep.drift = ct::cross_radius_drift(outer, inner, norm, order / 2);
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace euler_lab

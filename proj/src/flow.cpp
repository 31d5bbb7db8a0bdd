#include "euler_lab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "euler_lab/kernels.hpp"

namespace euler_lab {

const char* const kUniformFlowMessage =
    "spatially uniform initial velocity rejected: u(x) = const has nonzero mean, and for such flows "
    "u(x,t) = w(t) with arbitrary w(t) is a local Euler solution whose trajectories need not be analytic; "
    "supply zero-mean data";

namespace {

using std::cos;
using std::sin;

SpectralField random_band(const GridSpec& grid, std::uint64_t seed, int band, double s) {
  if (band < 1) throw RejectedInput("random_band: band must be >= 1");
  if (band > grid.cutoff()) throw RejectedInput("random_band: band exceeds the dealiased range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField raw(grid, Rank::vector3, false);
  for (int c = 0; c < 3; ++c)
    for (int k1 = -band; k1 <= band; ++k1)
      for (int k2 = -band; k2 <= band; ++k2)
        for (int k3 = -band; k3 <= band; ++k3) raw.set_mode(c, k1, k2, k3, {normal(rng), normal(rng)});
  // Real part in physical space makes the field hermitian.
  GridValues v = to_grid(raw);
  for (auto& x : v.values) x = x.real();
  SpectralField u = project_div_free(from_grid(v, true));
  const double norm = sobolev_norm(u, s);
  u *= 1.0 / norm;
  return u;
}

}  // namespace

SpectralField initial_condition(const GridSpec& grid, const InitialCondition& ic, double s) {
  if (ic.name == "taylor_green")
    return sample_on_grid(grid, Rank::vector3, [](double x, double y, double z) {
      return std::array<cplx, 3>{sin(x) * cos(y) * cos(z), -cos(x) * sin(y) * cos(z), 0.0};
    });
  if (ic.name == "abc") {
    const double a = ic.A, b = ic.B, c = ic.C;
    return sample_on_grid(grid, Rank::vector3, [=](double x, double y, double z) {
      return std::array<cplx, 3>{a * sin(z) + c * cos(y), b * sin(x) + a * cos(z), c * sin(y) + b * cos(x)};
    });
  }
  if (ic.name == "random_band") return random_band(grid, ic.seed, ic.band, s);
  if (ic.name == "uniform") {
    SpectralField u(grid, Rank::vector3);
    for (int c = 0; c < 3; ++c) u.component(c)[0] = ic.uniform[c];
    return u;
  }
  throw RejectedInput("unknown initial condition '" + ic.name + "' (taylor_green, abc, random_band, uniform)");
}

void validate_initial_velocity(const SpectralField& u0, double s) {
  if (u0.rank() != Rank::vector3) throw RejectedInput("initial velocity must be a vector field");
  const double total = sobolev_norm(u0, 0.0);
  double mean2 = 0.0;
  for (int c = 0; c < 3; ++c) mean2 += std::norm(mean(u0, c));
  const double mean_norm = std::sqrt(mean2);
  const double scale = std::max(1.0, total);
  if (mean_norm > 1e-12 * scale) {
    const double fluctuation = std::sqrt(std::max(0.0, total * total - mean2));
    if (fluctuation <= 1e-12 * scale) throw RejectedInput(kUniformFlowMessage);
    throw RejectedInput("initial velocity has nonzero mean");
  }
  if (sobolev_norm(divergence(u0), s - 1.0) > 1e-10 * std::max(1.0, sobolev_norm(u0, s)))
    throw RejectedInput("initial velocity is not divergence-free");
  const int band = u0.grid().n / 8;
  if (max_amplitude_beyond(u0, band) > 1e-13 * std::max(1.0, total))
    throw RejectedInput("initial velocity is not band-limited to |k_i| <= n/8 = " + std::to_string(band));
}

std::vector<Point3> default_particles(std::uint64_t seed, int random_count) {
  std::vector<Point3> pts;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        pts.push_back({a * std::numbers::pi, b * std::numbers::pi, c * std::numbers::pi});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < random_count; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    pts.push_back({x, y, z});
  }
  return pts;
}

complex_time::AnalyticOde<SpectralField> lagrangian_ode(const SpectralField& w0, const VelocityOptions& options) {
  complex_time::AnalyticOde<SpectralField> ode;
  ode.rhs = [w0, options](const SpectralField& d) { return solve_velocity(DisplacementMap{d}, w0, options).U; };
  ode.x0 = SpectralField(w0.grid(), Rank::vector3, true);
  const double s = options.s;
  ode.norm = [s](const SpectralField& d) { return sobolev_norm(d, s); };
  return ode;
}

double lagrangian_energy(const DisplacementMap& map, const SpectralField& U) {
  const JacobianBundle jac = jacobian(map);
  const GridValues u = to_grid(U);
  const std::size_t np = map.grid().points();
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double u2 = 0.0;
    for (int c = 0; c < 3; ++c) u2 += std::norm(u.values[c * np + p]);
    acc += u2 * jac.det_grid[p].real();
  }
  return 0.5 * acc / static_cast<double>(np);
}

double eulerian_energy(const SpectralField& u) {
  const double n = sobolev_norm(u, 0.0);
  return 0.5 * n * n;
}

double Trajectory::energy_drift() const {
  double worst = 0.0;
  if (energy.empty() || energy.front() == 0.0) return 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()) / energy.front());
  return worst;
}

double Trajectory::max_det_drift() const {
  double worst = 0.0;
  for (double d : det_drift) worst = std::max(worst, d);
  return worst;
}

std::vector<Point3> track(const DisplacementMap& map, const std::vector<Point3>& particles) {
  const std::vector<cplx> d = eval_at_points(map.d, particles);
  std::vector<Point3> out(particles.size());
  for (std::size_t p = 0; p < particles.size(); ++p)
    for (int c = 0; c < 3; ++c) out[p][c] = particles[p][c] + d[3 * p + c];
  return out;
}

std::vector<Point3> mapped_grid_points(const DisplacementMap& map) {
  const GridSpec& g = map.grid();
  const GridValues d = to_grid(map.d);
  const std::size_t np = g.points();
  std::vector<Point3> out(np);
  std::size_t p = 0;
  for (int i1 = 0; i1 < g.n; ++i1)
    for (int i2 = 0; i2 < g.n; ++i2)
      for (int i3 = 0; i3 < g.n; ++i3, ++p) {
        const auto x = grid_point(g, i1, i2, i3);
        for (int c = 0; c < 3; ++c) out[p][c] = x[c] + d.values[c * np + p];
      }
  return out;
}

Trajectory evolve_real(const SpectralField& u0, const EvolveOptions& options) {
  if (!(options.dt > 0.0) || !(options.t_end > 0.0)) throw RejectedInput("evolve: dt and t_end must be positive");
  const int steps = std::max(4, static_cast<int>(std::lround(options.t_end / options.dt)));
  const SpectralField w0 = curl(u0);
  const auto ode = lagrangian_ode(w0, options.velocity);
  const auto ray = complex_time::ray_integrate(ode, 0.0, options.t_end, steps);

  Trajectory traj;
  for (std::size_t j = 0; j < ray.states.size(); ++j) {
    const DisplacementMap map{ray.states[j]};
    SpectralField U;
    try {
      U = solve_velocity(map, w0, options.velocity).U;
    } catch (const std::exception& e) {
      traj.failure = e.what();
      traj.failure_time = ray.time(j).real();
      break;
    }
    traj.times.push_back(ray.time(j).real());
    traj.energy.push_back(lagrangian_energy(map, U));
    const JacobianBundle jac = jacobian(map);
    double drift = 0.0;
    for (const cplx& v : jac.det_grid) drift = std::max(drift, std::abs(v - 1.0));
    traj.det_drift.push_back(drift);
    traj.positions.push_back(track(map, options.particles));
    traj.maps.push_back(map.d);
    traj.velocities.push_back(std::move(U));
  }
  if (!ray.ok() && !traj.failure) {
    traj.failure = ray.failure->message;
    traj.failure_time = ray.time(static_cast<std::size_t>(ray.failure->index)).real();
  }
  return traj;
}

DisplacementMap exp_map(const SpectralField& v, double dt, const VelocityOptions& velocity) {
  const int steps = std::max(4, static_cast<int>(std::lround(1.0 / dt)));
  const auto ode = lagrangian_ode(curl(v), velocity);
  auto ray = complex_time::ray_integrate(ode, 0.0, 1.0, steps);
  if (!ray.ok()) throw NonConvergence("exp_map: " + ray.failure->message, {});
  return {std::move(ray.states.back())};
}

double EulerReference::energy_drift() const {
  double worst = 0.0;
  if (energy.empty() || energy.front() == 0.0) return 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()) / energy.front());
  return worst;
}

EulerReference euler_reference_evolve(const SpectralField& u0, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw RejectedInput("oracle: dt and t_end must be positive");
  const int steps = std::max(4, static_cast<int>(std::lround(t_end / dt)));
  complex_time::AnalyticOde<SpectralField> ode;
  ode.rhs = [](const SpectralField& u) {
    const SpectralField w = curl(u);
    const GridValues ug = to_grid(u), wg = to_grid(w);
    GridValues out(u.grid(), 3);
    kernels::active::cross({ug.component(0), ug.component(1), ug.component(2)},
                           {wg.component(0), wg.component(1), wg.component(2)},
                           {out.component(0), out.component(1), out.component(2)});
    return project_div_free(dealias(from_grid(out, u.hermitian())));
  };
  ode.x0 = u0;
  ode.norm = [](const SpectralField& u) { return sobolev_norm(u, 0.0); };
  const auto ray = complex_time::ray_integrate(ode, 0.0, t_end, steps);

  EulerReference ref;
  for (std::size_t j = 0; j < ray.states.size(); ++j) {
    ref.times.push_back(ray.time(j).real());
    ref.energy.push_back(eulerian_energy(ray.states[j]));
  }
  ref.u = ray.states.back();
  if (!ray.ok()) ref.failure = "oracle blow-up: " + ray.failure->message;
  return ref;
}

}  // namespace euler_lab

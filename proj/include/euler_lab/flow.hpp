#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "euler_lab/complex_time.hpp"
#include "euler_lab/displacement.hpp"
#include "euler_lab/lagrangian.hpp"

namespace euler_lab {

/// Named initial velocity family. Fields other than the family's own are ignored.
struct InitialCondition {
  std::string name = "taylor_green";  ///< taylor_green | abc | random_band | uniform
  double A = 1.0, B = 1.0, C = 1.0;   ///< abc coefficients
  std::uint64_t seed = 1;             ///< random_band
  int band = 2;                       ///< random_band: max |k_i|
  std::array<double, 3> uniform{1.0, 0.0, 0.0};  ///< uniform: the constant vector
};

/// Unit-amplitude member of the family:
///   taylor_green = (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)
///   abc          = (A sin x3 + C cos x2, B sin x1 + A cos x3, C sin x2 + B cos x1)
///   random_band  = random divergence-free zero-mean field, |k_i| <= band, |u|_s = 1
///   uniform      = constant field (always rejected by validate_initial_velocity)
/// Unknown names throw RejectedInput.
SpectralField initial_condition(const GridSpec& grid, const InitialCondition& ic,
                                double s = kDefaultSobolevIndex);

/// Message used when a spatially uniform velocity is rejected.
extern const char* const kUniformFlowMessage;

/// Admissibility of an initial velocity: divergence-free, zero-mean and
/// band-limited to |k_i| <= n/8. Throws RejectedInput; spatially uniform
/// fields get kUniformFlowMessage.
void validate_initial_velocity(const SpectralField& u0, double s = kDefaultSobolevIndex);

/// The 8 points (0 or pi)^3 followed by `random_count` uniform points drawn
/// from `seed`.
std::vector<Point3> default_particles(std::uint64_t seed, int random_count = 8);

/// dd/dt = U(d) with U from solve_velocity; state norm is H^s of d.
complex_time::AnalyticOde<SpectralField> lagrangian_ode(const SpectralField& w0, const VelocityOptions& options);

/// Kinetic energy (1/2) <|U|^2 det J> in the mean-value convention.
double lagrangian_energy(const DisplacementMap& map, const SpectralField& U);
/// (1/2) <|u|^2> of an Eulerian velocity.
double eulerian_energy(const SpectralField& u);

struct EvolveOptions {
  double t_end = 0.5;
  double dt = 0.05;
  VelocityOptions velocity;
  std::vector<Point3> particles;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> maps;   ///< d at each time
  std::vector<SpectralField> velocities;  ///< U at each time
  std::vector<double> energy;
  std::vector<double> det_drift;     ///< max |det J - 1| on the grid
  std::vector<std::vector<Point3>> positions;  ///< per time, per particle: g_t(x0)
  std::optional<std::string> failure;
  double failure_time = 0.0;

  double energy_drift() const;      ///< max relative |E(t) - E(0)|
  double max_det_drift() const;
};

/// RK4 in real time from g_0 = Id. Stops early (failure set) if a velocity
/// solve fails.
Trajectory evolve_real(const SpectralField& u0, const EvolveOptions& options);

/// Time-one map g_1(v) from evolve_real with u0 = v.
DisplacementMap exp_map(const SpectralField& v, double dt = 0.05, const VelocityOptions& velocity = {});

struct EulerReference {
  SpectralField u;
  std::vector<double> times;
  std::vector<double> energy;
  std::optional<std::string> failure;

  double energy_drift() const;
};

/// Dealiased pseudo-spectral RK4 for du/dt = P(u x curl u).
EulerReference euler_reference_evolve(const SpectralField& u0, double t_end, double dt);

/// Points g(x) = x + d(x) for every grid point x, in storage order.
std::vector<Point3> mapped_grid_points(const DisplacementMap& map);

/// Positions g(x0) = x0 + d(x0).
std::vector<Point3> track(const DisplacementMap& map, const std::vector<Point3>& particles);

}  // namespace euler_lab

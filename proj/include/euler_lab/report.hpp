#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <valarray>
#include <vector>

#include "json.hpp"

#include "euler_lab/config.hpp"

namespace euler_lab {

using complex_time::RadiusEstimate;

/// Taylor data of one tracked particle x(t) = g_t(x0).
struct ParticleSeries {
  int id = 0;
  Point3 x0{};
  std::vector<double> coeff_norms;  ///< Euclidean norms of the position coefficients
  RadiusEstimate radius;
};

/// One line of trajectories.csv.
struct TrajectoryRow {
  cplx t;
  int particle = 0;
  Point3 x{};
};

/// Output of an analyticity run. Optional entries are null in JSON when the
/// stage did not run (or does not apply, e.g. energy in toy mode).
struct DiagnosticsReport {
  std::string mode = "fluid";  ///< fluid | toy
  double rho = 0.0;
  int order = 0;
  std::vector<double> coeff_norms;  ///< Picard coefficients, state norm
  std::optional<RadiusEstimate> radius;
  std::vector<double> picard_updates;
  bool picard_converged = false;
  bool picard_monotone = false;
  std::optional<double> picard_ray_discrepancy;
  std::optional<double> loop_error;          ///< loop_steps
  std::optional<double> loop_error_refined;  ///< 2 loop_steps
  std::optional<double> cross_radius_drift;
  std::optional<double> energy_drift;
  std::optional<double> determinant_drift;
  std::optional<double> oracle_velocity_discrepancy;
  std::vector<ParticleSeries> particles;
  std::vector<TrajectoryRow> trajectories;
  std::vector<std::string> failures;  ///< "stage: message"; later stages were skipped
  bool nonconvergence = false;
  double seconds = 0.0;

  bool ok() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

nlohmann::json to_json(const RadiusEstimate& r);
/// {rho, order, coeff_norms, source}
nlohmann::json series_json(double rho, int order, const std::vector<double>& coeff_norms, const char* source);

/// t_re,t_im,particle_id,x1_re,x1_im,x2_re,x2_im,x3_re,x3_im
void write_trajectories_csv(const std::filesystem::path& path, const std::vector<TrajectoryRow>& rows);

/// Picard on the disk, ray fan, monodromy with step doubling, cross-radius
/// extraction, radius estimates, tracked particles, and real-axis checks
/// (energy, determinant, Eulerian oracle) for the Lagrangian flow of p.
DiagnosticsReport analyticity_report(const FlowProblem& p);

/// Same pipeline on dx/dt = x^2, x(0) = 1 (pole at t = 1), with p's rho,
/// order and step counts.
DiagnosticsReport toy_report(const FlowProblem& p);

/// Parameter-circle evidence for analyticity of v -> exp_map(v).
struct ProbeReport {
  std::string mode = "fluid";  ///< fluid | surrogate
  double eps_radius = 0.0;
  int order = 0;
  int samples = 0;
  std::vector<double> coeff_norms;       ///< at eps_radius
  std::vector<double> coeff_norms_half;  ///< at eps_radius / 2
  std::vector<cplx> coefficients;        ///< surrogate only: the scalar series
  std::optional<double> drift;
  std::vector<std::string> failures;
  bool nonconvergence = false;
  double seconds = 0.0;

  bool ok() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

/// Cauchy coefficients in eps of exp_map(v + eps w) at |eps| = r and r/2.
ProbeReport parameter_analyticity_probe(const SpectralField& v, const SpectralField& w, const FlowProblem& p);

/// x' = y x, x(0) = 1 integrated to t = 1, sampled on |y| = r: the series of e^y.
ProbeReport surrogate_probe(double eps_radius, int order, int samples, int steps = 200);

}  // namespace euler_lab

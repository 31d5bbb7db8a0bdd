#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "euler_lab/flow.hpp"

namespace euler_lab {

struct Tolerances {
  double chart = 1e-12;
  int chart_max_iter = 60;
  double chart_radius = 0.2;
  double velocity = 1e-13;  ///< solve_velocity residual target
  int velocity_max_iter = 200;
  double picard = 1e-10;
};

/// Everything a CLI run needs; the JSON config mirrors these fields.
struct FlowProblem {
  GridSpec grid{16};
  double s = kDefaultSobolevIndex;
  InitialCondition initial;
  double amplitude = 0.1;
  std::string input;  ///< optional snapshot replacing the named initial condition

  double rho = 0.1;  ///< complex-time disk radius
  int order = 8;     ///< K
  int ray_count = 16;
  int ray_steps = 200;
  int loop_steps = 128;
  Tolerances tol;

  double t_end = 0.5;
  double dt = 0.05;
  std::uint64_t seed = 1;
  int random_particles = 8;

  // parameter probe: circle in eps around v + eps w
  InitialCondition direction{.name = "abc"};
  double direction_amplitude = 0.05;
  double eps_radius = 0.2;
  int probe_order = 6;
  int probe_samples = 16;

  std::string output_dir = "euler_lab_out";

  /// Range checks on every field; throws RejectedInput.
  void validate() const;
};

VelocityOptions velocity_options(const FlowProblem& p);

/// amplitude * initial_condition (or the snapshot in `input`), validated.
SpectralField initial_velocity(const FlowProblem& p);

/// amplitude-free direction w for the parameter probe.
SpectralField probe_direction(const FlowProblem& p);

nlohmann::json to_json(const FlowProblem& p);
/// Missing keys keep their defaults; unknown keys and bad values throw RejectedInput.
FlowProblem flow_problem_from_json(const nlohmann::json& j);
FlowProblem load_flow_problem(const std::string& path);

}  // namespace euler_lab

#include "euler_lab/config.hpp"

#include <fstream>
#include <set>

#include "euler_lab/snapshot.hpp"

namespace euler_lab {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw RejectedInput("config: " + message);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), where + " must be an object");
  for (const auto& item : j.items())
    require(allowed.count(item.key()) > 0, "unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw RejectedInput(std::string("config: bad value for '") + key + "'");
  }
}

json ic_to_json(const InitialCondition& ic) {
  return {{"name", ic.name}, {"A", ic.A},       {"B", ic.B},
          {"C", ic.C},       {"seed", ic.seed}, {"band", ic.band},
          {"uniform", ic.uniform}};
}

InitialCondition ic_from_json(const json& j, const std::string& where) {
  check_keys(j, {"name", "A", "B", "C", "seed", "band", "uniform"}, where);
  InitialCondition ic;
  read(j, "name", ic.name);
  read(j, "A", ic.A);
  read(j, "B", ic.B);
  read(j, "C", ic.C);
  read(j, "seed", ic.seed);
  read(j, "band", ic.band);
  read(j, "uniform", ic.uniform);
  return ic;
}

}  // namespace

void FlowProblem::validate() const {
  grid.validate();
  require(s > 2.5, "s must exceed 5/2");
  require(std::isfinite(amplitude), "amplitude must be finite");
  require(rho > 0.0, "rho must be positive");
  require(order >= 1, "order must be >= 1");
  require(ray_count >= 1, "ray_count must be >= 1");
  require(ray_steps >= 4 && ray_steps % 2 == 0, "ray_steps must be even and >= 4");
  require(loop_steps >= 4, "loop_steps must be >= 4");
  require(tol.chart > 0.0 && tol.velocity > 0.0 && tol.picard > 0.0, "tolerances must be positive");
  require(tol.chart_max_iter >= 1 && tol.velocity_max_iter >= 1, "iteration limits must be >= 1");
  require(tol.chart_radius > 0.0, "chart_radius must be positive");
  require(t_end > 0.0 && dt > 0.0, "t_end and dt must be positive");
  require(random_particles >= 0, "random_particles must be >= 0");
  require(eps_radius > 0.0, "eps_radius must be positive");
  require(probe_order >= 1 && probe_samples >= 2 * probe_order + 2, "probe needs samples >= 2 order + 2");
}

VelocityOptions velocity_options(const FlowProblem& p) {
  VelocityOptions o;
  o.tol = p.tol.velocity;
  o.max_iter = p.tol.velocity_max_iter;
  o.s = p.s;
  return o;
}

SpectralField initial_velocity(const FlowProblem& p) {
  SpectralField u;
  if (!p.input.empty()) {
    u = read_snapshot(p.input);
    if (!(u.grid() == p.grid))
      throw RejectedInput("snapshot grid n = " + std::to_string(u.grid().n) + " does not match --grid " +
                          std::to_string(p.grid.n));
  } else {
    u = p.amplitude * initial_condition(p.grid, p.initial, p.s);
  }
  validate_initial_velocity(u, p.s);
  return u;
}

SpectralField probe_direction(const FlowProblem& p) {
  SpectralField w = p.direction_amplitude * initial_condition(p.grid, p.direction, p.s);
  validate_initial_velocity(w, p.s);
  return w;
}

json to_json(const FlowProblem& p) {
  return {
      {"grid", {{"n", p.grid.n}, {"dealias_fraction", p.grid.dealias_fraction}}},
      {"s", p.s},
      {"initial", ic_to_json(p.initial)},
      {"amplitude", p.amplitude},
      {"input", p.input},
      {"rho", p.rho},
      {"order", p.order},
      {"ray_count", p.ray_count},
      {"ray_steps", p.ray_steps},
      {"loop_steps", p.loop_steps},
      {"tolerances",
       {{"chart", p.tol.chart},
        {"chart_max_iter", p.tol.chart_max_iter},
        {"chart_radius", p.tol.chart_radius},
        {"velocity", p.tol.velocity},
        {"velocity_max_iter", p.tol.velocity_max_iter},
        {"picard", p.tol.picard}}},
      {"t_end", p.t_end},
      {"dt", p.dt},
      {"seed", p.seed},
      {"random_particles", p.random_particles},
      {"probe",
       {{"direction", ic_to_json(p.direction)},
        {"direction_amplitude", p.direction_amplitude},
        {"eps_radius", p.eps_radius},
        {"order", p.probe_order},
        {"samples", p.probe_samples}}},
      {"output_dir", p.output_dir},
  };
}

FlowProblem flow_problem_from_json(const json& j) {
  check_keys(j,
             {"grid", "s", "initial", "amplitude", "input", "rho", "order", "ray_count", "ray_steps", "loop_steps",
              "tolerances", "t_end", "dt", "seed", "random_particles", "probe", "output_dir"},
             "config");
  FlowProblem p;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"n", "dealias_fraction"}, "grid");
    read(g, "n", p.grid.n);
    read(g, "dealias_fraction", p.grid.dealias_fraction);
  }
  read(j, "s", p.s);
  if (j.contains("initial")) p.initial = ic_from_json(j.at("initial"), "initial");
  read(j, "amplitude", p.amplitude);
  read(j, "input", p.input);
  read(j, "rho", p.rho);
  read(j, "order", p.order);
  read(j, "ray_count", p.ray_count);
  read(j, "ray_steps", p.ray_steps);
  read(j, "loop_steps", p.loop_steps);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t, {"chart", "chart_max_iter", "chart_radius", "velocity", "velocity_max_iter", "picard"},
               "tolerances");
    read(t, "chart", p.tol.chart);
    read(t, "chart_max_iter", p.tol.chart_max_iter);
    read(t, "chart_radius", p.tol.chart_radius);
    read(t, "velocity", p.tol.velocity);
    read(t, "velocity_max_iter", p.tol.velocity_max_iter);
    read(t, "picard", p.tol.picard);
  }
  read(j, "t_end", p.t_end);
  read(j, "dt", p.dt);
  read(j, "seed", p.seed);
  read(j, "random_particles", p.random_particles);
  if (j.contains("probe")) {
    const json& q = j.at("probe");
    check_keys(q, {"direction", "direction_amplitude", "eps_radius", "order", "samples"}, "probe");
    if (q.contains("direction")) p.direction = ic_from_json(q.at("direction"), "probe.direction");
    read(q, "direction_amplitude", p.direction_amplitude);
    read(q, "eps_radius", p.eps_radius);
    read(q, "order", p.probe_order);
    read(q, "samples", p.probe_samples);
  }
  read(j, "output_dir", p.output_dir);
  p.validate();
  return p;
}

FlowProblem load_flow_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw RejectedInput("config: " + path + " is not valid JSON: " + e.what());
  }
  return flow_problem_from_json(j);
}

}  // namespace euler_lab

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "euler_lab/report.hpp"
#include "test_support.hpp"

using namespace euler_lab;
using nlohmann::json;

namespace {

FlowProblem toy_problem() {
  FlowProblem p;
  p.rho = 0.5;
  p.order = 12;
  p.ray_steps = 400;
  p.loop_steps = 400;
  p.tol.picard = 1e-13;
  return p;
}

}  // namespace

TEST_CASE("toy report on x' = x^2") {
  const DiagnosticsReport r = toy_report(toy_problem());
  CHECK(r.ok());
  CHECK(r.mode == "toy");
  CHECK(r.picard_converged);
  CHECK(r.picard_monotone);
  REQUIRE(r.coeff_norms.size() == 13);
  for (double a : r.coeff_norms) CHECK(a == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(r.radius.has_value());
  CHECK(std::abs(r.radius->radius - 1.0) <= 0.02);
  CHECK(r.radius->lower > 0.0);
  REQUIRE(r.loop_error.has_value());
  CHECK(*r.loop_error <= 1e-7);
  CHECK(*r.loop_error_refined <= 1e-12);
  // Truncation of the degree-12 polynomial: sum_{k > 12} 0.5^k.
  CHECK(*r.picard_ray_discrepancy <= 1.1 * std::pow(0.5, 12));
  CHECK(*r.cross_radius_drift <= 1e-6);
  CHECK_FALSE(r.energy_drift.has_value());

  const json j = r.to_json();
  CHECK(j["mode"] == "toy");
  CHECK(j["coeff_norms"].size() == 13);
  CHECK(j["energy_drift"].is_null());
  CHECK(j.contains("radius"));
  CHECK(j["failures"].empty());
}

TEST_CASE("toy report records a pole inside the disk") {
  FlowProblem p = toy_problem();
  p.rho = 1.3;
  const DiagnosticsReport r = toy_report(p);
  CHECK_FALSE(r.ok());
  CHECK(r.failures.size() >= 1);
}

TEST_CASE("report with zero vorticity") {
  FlowProblem p;
  p.amplitude = 0.0;
  p.order = 4;
  p.ray_count = 10;
  p.ray_steps = 8;
  p.loop_steps = 8;
  p.random_particles = 2;
  const DiagnosticsReport r = analyticity_report(p);
  CHECK(r.ok());
  REQUIRE(r.coeff_norms.size() == 5);
  for (double a : r.coeff_norms) CHECK(a == 0.0);
  REQUIRE(r.radius.has_value());
  CHECK(r.radius->infinite);
  CHECK(*r.loop_error == 0.0);
  REQUIRE(r.particles.size() == 10);
  for (const auto& ps : r.particles) CHECK(ps.radius.infinite);
  CHECK_FALSE(r.trajectories.empty());
  const std::string dumped = r.to_json().dump();
  CHECK(dumped.find("Infinity") == std::string::npos);
}

TEST_CASE("surrogate probe recovers e^y") {
  const ProbeReport r = surrogate_probe(1.0, 10, 24);
  CHECK(r.ok());
  REQUIRE(r.coefficients.size() == 11);
  for (int k = 0; k <= 10; ++k) CHECK(std::abs(r.coefficients[k] - 1.0 / std::tgamma(k + 1.0)) <= 1e-8);
  REQUIRE(r.drift.has_value());
  CHECK(*r.drift <= 1e-8);
  CHECK(r.to_json()["mode"] == "surrogate");
}

TEST_CASE("parameter probe with w = 0") {
  FlowProblem p;
  p.probe_order = 2;
  p.probe_samples = 6;
  const SpectralField v = 0.05 * initial_condition(p.grid, {});
  const ProbeReport r = parameter_analyticity_probe(v, SpectralField(p.grid, Rank::vector3), p);
  CHECK(r.ok());
  REQUIRE(r.coeff_norms.size() == 3);
  CHECK(r.coeff_norms[0] > 0.0);
  CHECK(r.coeff_norms[1] <= 1e-14 * r.coeff_norms[0]);
  CHECK(r.coeff_norms[2] <= 1e-14 * r.coeff_norms[0]);
}

TEST_CASE("trajectory CSV layout") {
  const auto path = std::filesystem::temp_directory_path() / "euler_lab_test_traj.csv";
  write_trajectories_csv(path, {{cplx(0.1, -0.2), 3, Point3{cplx(1, 2), cplx(3, 4), cplx(5, 6)}}});
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t_re,t_im,particle_id,x1_re,x1_im,x2_re,x2_im,x3_re,x3_im");
  CHECK(row.rfind("0.1", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  std::filesystem::remove(path);
}

TEST_CASE("config JSON round trip and rejection") {
  FlowProblem p;
  p.grid.n = 32;
  p.initial.name = "abc";
  p.initial.A = 0.5;
  p.rho = 0.05;
  p.order = 6;
  p.tol.velocity = 1e-11;
  p.direction.name = "random_band";
  p.output_dir = "elsewhere";
  const FlowProblem q = flow_problem_from_json(to_json(p));
  CHECK(to_json(q) == to_json(p));
  CHECK(q.grid.n == 32);
  CHECK(q.initial.A == 0.5);
  CHECK(q.tol.velocity == 1e-11);

  CHECK(to_json(flow_problem_from_json(json::object())) == to_json(FlowProblem{}));
  CHECK_THROWS_AS(flow_problem_from_json(json{{"rhoo", 0.1}}), RejectedInput);
  CHECK_THROWS_AS(flow_problem_from_json(json{{"rho", "big"}}), RejectedInput);
  CHECK_THROWS_AS(flow_problem_from_json(json{{"rho", -1.0}}), RejectedInput);
  CHECK_THROWS_AS(flow_problem_from_json(json{{"grid", {{"n", 7}}}}), RejectedInput);
  CHECK_THROWS_AS(flow_problem_from_json(json{{"tolerances", {{"bogus", 1}}}}), RejectedInput);
  CHECK_THROWS_AS(load_flow_problem("/nonexistent/config.json"), RejectedInput);
}

TEST_CASE("initial_velocity applies amplitude and validation") {
  FlowProblem p;
  p.amplitude = 0.3;
  const SpectralField u = initial_velocity(p);
  CHECK(testing_support::max_diff(u, 0.3 * initial_condition(p.grid, {})) == 0.0);
  p.initial.name = "uniform";
  CHECK_THROWS_WITH_AS(initial_velocity(p), kUniformFlowMessage, RejectedInput);
}

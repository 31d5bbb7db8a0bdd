#include "euler_lab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "euler_lab/report.hpp"
#include "euler_lab/snapshot.hpp"
#include "euler_lab/volume_chart.hpp"

namespace euler_lab {

using nlohmann::json;
namespace fs = std::filesystem;
namespace ct = complex_time;

namespace {

// Flags shared by every subcommand; unset ones leave the config value alone.
struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> tol;
  std::string ic;
  std::optional<double> amplitude;
  std::string input;
  std::optional<double> rho;
  std::optional<int> order;
  std::optional<int> steps;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> eps_radius;
  bool toy = false;
  bool surrogate = false;
  bool spill = false;
};

FlowProblem build_problem(const Overrides& o) {
  FlowProblem p = o.config.empty() ? FlowProblem{} : load_flow_problem(o.config);
  if (!o.out.empty()) p.output_dir = o.out;
  if (o.seed) p.seed = p.initial.seed = *o.seed;
  if (o.grid) p.grid.n = *o.grid;
  if (o.tol) p.tol.chart = p.tol.velocity = *o.tol;
  if (!o.ic.empty()) p.initial.name = o.ic;
  if (o.amplitude) p.amplitude = *o.amplitude;
  if (!o.input.empty()) p.input = o.input;
  if (o.rho) p.rho = *o.rho;
  if (o.order) p.order = *o.order;
  if (o.steps) p.ray_steps = *o.steps;
  if (o.t_end) p.t_end = *o.t_end;
  if (o.dt) p.dt = *o.dt;
  if (o.eps_radius) p.eps_radius = *o.eps_radius;
  p.validate();
  return p;
}

fs::path prepare_output(const FlowProblem& p) {
  const fs::path dir(p.output_dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << to_json(p).dump(2) << '\n';
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json history_json(const std::vector<double>& h) {
  json a = json::array();
  for (double v : h) a.push_back(v);
  return a;
}

int cmd_chart(const FlowProblem& p) {
  ChartProblem cp;
  cp.v = initial_velocity(p);
  cp.s = p.s;
  cp.tol = p.tol.chart;
  cp.max_iter = p.tol.chart_max_iter;
  cp.radius = p.tol.chart_radius;
  const ChartSolution sol = solve_phi(cp);
  const fs::path dir = prepare_output(p);
  write_snapshot(dir / "phi", sol.phi);
  write_snapshot(dir / "map", sol.map.d);
  write_json(dir / "chart.json", {{"iterations", sol.iterations},
                                  {"history", history_json(sol.history)},
                                  {"det_residual", sol.det_residual},
                                  {"phi_norm_s1", sobolev_norm(sol.phi, p.s + 1.0)}});
  std::cout << "chart: " << sol.iterations << " iterations, max |det - 1| = " << sol.det_residual << '\n';
  return kExitOk;
}

int cmd_evolve(const FlowProblem& p) {
  EvolveOptions opts;
  opts.t_end = p.t_end;
  opts.dt = p.dt;
  opts.velocity = velocity_options(p);
  opts.particles = default_particles(p.seed, p.random_particles);
  const Trajectory traj = evolve_real(initial_velocity(p), opts);
  const fs::path dir = prepare_output(p);
  std::vector<TrajectoryRow> rows;
  for (std::size_t j = 0; j < traj.times.size(); ++j)
    for (std::size_t q = 0; q < traj.positions[j].size(); ++q)
      rows.push_back({traj.times[j], static_cast<int>(q), traj.positions[j][q]});
  write_trajectories_csv(dir / "trajectories.csv", rows);
  if (!traj.maps.empty()) write_snapshot(dir / "displacement", traj.maps.back());
  write_json(dir / "evolve.json", {{"times", traj.times},
                                   {"energy", traj.energy},
                                   {"det_drift", traj.det_drift},
                                   {"energy_drift", traj.energy_drift()},
                                   {"max_det_drift", traj.max_det_drift()},
                                   {"failure", traj.failure ? json(*traj.failure) : json(nullptr)},
                                   {"failure_time", traj.failure ? json(traj.failure_time) : json(nullptr)}});
  std::cout << "evolve: t = " << (traj.times.empty() ? 0.0 : traj.times.back())
            << ", energy drift = " << traj.energy_drift() << ", max |det - 1| = " << traj.max_det_drift() << '\n';
  if (traj.failure) {
    std::cerr << "error: " << *traj.failure << " at t = " << traj.failure_time << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

template <typename S>
int report_picard(const ct::PicardResult<S>& res, const std::function<double(const S&)>& norm, const FlowProblem& p,
                  const fs::path& dir) {
  json j = series_json(p.rho, p.order, ct::coefficient_norms(res.series, norm), ct::to_string(res.series.source));
  j["converged"] = res.converged;
  j["update_norms"] = history_json(res.update_norms);
  j["failure"] = res.failure ? json(res.failure->message) : json(nullptr);
  write_json(dir / "series.json", j);
  std::cout << "picard: " << res.update_norms.size() << " sweeps, converged = " << std::boolalpha << res.converged
            << '\n';
  if (res.failure) std::cerr << "error: " << res.failure->message << '\n';
  return res.converged && !res.failure ? kExitOk : kExitNonConvergence;
}

using Toy = std::valarray<cplx>;

ct::AnalyticOde<Toy> toy_ode() {
  return {[](const Toy& x) -> Toy { return x * x; }, Toy{cplx(1.0)}, ct::euclidean_norm};
}

int cmd_picard(const FlowProblem& p, bool toy, bool spill) {
  const fs::path dir = prepare_output(p);
  if (toy) {
    const auto ode = toy_ode();
    return report_picard<Toy>(ct::picard_disk(ode, p.rho, p.order, p.tol.picard, p.order + 4), ode.norm, p, dir);
  }
  const auto ode = lagrangian_ode(curl(initial_velocity(p)), velocity_options(p));
  const auto res = ct::picard_disk(ode, p.rho, p.order, p.tol.picard, p.order + 4);
  if (spill)
    for (std::size_t k = 0; k < res.series.coeffs.size(); ++k)
      write_snapshot(dir / ("coeff_" + std::to_string(k)), res.series.coeffs[k]);
  return report_picard<SpectralField>(res, ode.norm, p, dir);
}

template <typename S, typename Track>
int report_rays(const ct::AnalyticOde<S>& ode, const FlowProblem& p, const fs::path& dir, Track&& track_state) {
  const int count = std::max(p.ray_count, 1);
  std::vector<double> thetas(count);
  for (int j = 0; j < count; ++j) thetas[j] = 2.0 * std::numbers::pi * j / count;
  const auto rays = ct::ray_fan(ode, thetas, p.rho, p.ray_steps);
  json arr = json::array();
  std::vector<TrajectoryRow> rows;
  bool ok = true;
  for (const auto& r : rays) {
    ok = ok && r.ok();
    arr.push_back({{"theta", r.theta},
                   {"steps_completed", r.states.size() - 1},
                   {"endpoint_norm", ode.norm(r.states.back())},
                   {"failure", r.failure ? json(r.failure->message) : json(nullptr)}});
    for (std::size_t j = 0; j < r.states.size(); j += std::max(1, r.steps / 10)) track_state(r.time(j), r.states[j], rows);
  }
  write_json(dir / "rays.json", {{"rho", p.rho}, {"steps", p.ray_steps}, {"rays", arr}});
  write_trajectories_csv(dir / "trajectories.csv", rows);
  std::cout << "rays: " << count << " rays to rho = " << p.rho << (ok ? "" : " (some failed)") << '\n';
  return ok ? kExitOk : kExitNonConvergence;
}

int cmd_rays(const FlowProblem& p, bool toy) {
  const fs::path dir = prepare_output(p);
  if (toy)
    return report_rays(toy_ode(), p, dir, [](cplx t, const Toy& x, std::vector<TrajectoryRow>& rows) {
      rows.push_back({t, 0, {x[0], 0.0, 0.0}});
    });
  const auto particles = default_particles(p.seed, p.random_particles);
  const auto ode = lagrangian_ode(curl(initial_velocity(p)), velocity_options(p));
  return report_rays(ode, p, dir, [&](cplx t, const SpectralField& d, std::vector<TrajectoryRow>& rows) {
    const auto pos = track(DisplacementMap{d}, particles);
    for (std::size_t q = 0; q < pos.size(); ++q) rows.push_back({t, static_cast<int>(q), pos[q]});
  });
}

int cmd_report(const FlowProblem& p, bool toy) {
  const DiagnosticsReport rep = toy ? toy_report(p) : analyticity_report(p);
  const fs::path dir = prepare_output(p);
  write_json(dir / "report.json", rep.to_json());
  write_trajectories_csv(dir / "trajectories.csv", rep.trajectories);
  std::cout << "report: " << (rep.ok() ? "complete" : "incomplete") << " in " << rep.seconds << " s, written to "
            << (dir / "report.json").string() << '\n';
  for (const auto& f : rep.failures) std::cerr << "error: " << f << '\n';
  return rep.ok() ? kExitOk : kExitNonConvergence;
}

int cmd_probe(const FlowProblem& p, bool surrogate) {
  const ProbeReport rep = surrogate ? surrogate_probe(p.eps_radius, p.probe_order, p.probe_samples)
                                    : parameter_analyticity_probe(initial_velocity(p), probe_direction(p), p);
  const fs::path dir = prepare_output(p);
  write_json(dir / "probe.json", rep.to_json());
  std::cout << "probe-exp: drift = " << (rep.drift ? *rep.drift : std::nan("")) << '\n';
  for (const auto& f : rep.failures) std::cerr << "error: " << f << '\n';
  return rep.ok() ? kExitOk : kExitNonConvergence;
}

int cmd_oracle(const FlowProblem& p) {
  const EulerReference ref = euler_reference_evolve(initial_velocity(p), p.t_end, p.dt);
  const fs::path dir = prepare_output(p);
  write_snapshot(dir / "velocity", ref.u);
  write_json(dir / "oracle.json", {{"times", ref.times},
                                   {"energy", ref.energy},
                                   {"energy_drift", ref.energy_drift()},
                                   {"failure", ref.failure ? json(*ref.failure) : json(nullptr)}});
  std::cout << "oracle: t = " << p.t_end << ", energy drift = " << ref.energy_drift() << '\n';
  if (ref.failure) {
    std::cerr << "error: " << *ref.failure << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Lagrangian analyticity lab for 3D periodic Euler flows"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Overrides o;
  app.add_option("--config", o.config, "JSON config (FlowProblem fields)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "seed for random_band data and tracked particles");
  app.add_option("--grid", o.grid, "grid size n");
  app.add_option("--tol", o.tol, "chart and velocity solver tolerance");

  auto with_data = [&](CLI::App* sub) {
    sub->add_option("--ic", o.ic, "taylor_green | abc | random_band | uniform");
    sub->add_option("--amplitude", o.amplitude, "scale of the initial velocity");
    sub->add_option("--input", o.input, "initial velocity snapshot (.bin/.json/stem)");
  };
  auto with_disk = [&](CLI::App* sub) {
    sub->add_option("--rho", o.rho, "complex-time disk radius");
    sub->add_option("--order", o.order, "Taylor order K");
    sub->add_option("--steps", o.steps, "RK4 steps per ray");
  };
  auto with_time = [&](CLI::App* sub) {
    sub->add_option("--t-end", o.t_end, "final time");
    sub->add_option("--dt", o.dt, "time step");
  };

  CLI::App* chart = app.add_subcommand("chart", "volume-preserving chart g = Id + v + grad phi for v");
  with_data(chart);
  CLI::App* evolve = app.add_subcommand("evolve", "real-time Lagrangian evolution");
  with_data(evolve);
  with_time(evolve);
  CLI::App* picard = app.add_subcommand("picard", "Picard iteration on the complex-time disk");
  with_data(picard);
  with_disk(picard);
  picard->add_flag("--toy", o.toy, "run on dx/dt = x^2 instead of the fluid");
  picard->add_flag("--spill", o.spill, "write every coefficient as a field snapshot");
  CLI::App* rays = app.add_subcommand("rays", "RK4 along complex-time rays");
  with_data(rays);
  with_disk(rays);
  rays->add_flag("--toy", o.toy, "run on dx/dt = x^2 instead of the fluid");
  CLI::App* report = app.add_subcommand("report", "full analyticity report (report.json, trajectories.csv)");
  with_data(report);
  with_disk(report);
  report->add_flag("--toy", o.toy, "run on dx/dt = x^2 instead of the fluid");
  CLI::App* probe = app.add_subcommand("probe-exp", "parameter-circle probe of the exp map");
  with_data(probe);
  probe->add_option("--eps-radius", o.eps_radius, "parameter circle radius");
  probe->add_flag("--surrogate", o.surrogate, "run on x' = y x in the parameter y instead of the fluid");
  CLI::App* oracle = app.add_subcommand("oracle", "Eulerian pseudo-spectral reference solver");
  with_data(oracle);
  with_time(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const FlowProblem p = build_problem(o);
    if (chart->parsed()) return cmd_chart(p);
    if (evolve->parsed()) return cmd_evolve(p);
    if (picard->parsed()) return cmd_picard(p, o.toy, o.spill);
    if (rays->parsed()) return cmd_rays(p, o.toy);
    if (report->parsed()) return cmd_report(p, o.toy);
    if (probe->parsed()) return cmd_probe(p, o.surrogate);
    if (oracle->parsed()) return cmd_oracle(p);
  } catch (const RejectedInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const SingularMap& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitValidation;
}

}  // namespace euler_lab

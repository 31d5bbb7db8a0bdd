#include <cmath>

#include "composite_oracle.hpp"
#include "doctest.h"
#include "euler_lab/volume_chart.hpp"
#include "test_support.hpp"

using namespace euler_lab;
using namespace testing_support;
using std::cos;
using std::sin;

namespace {

SpectralField shear(const GridSpec& g, double eps) {
  return vector_field(g, [eps](double, double y, double) { return std::array<double, 3>{eps * sin(y), 0, 0}; });
}

DisplacementMap small_chart(const GridSpec& g, std::uint64_t seed, double norm, int band = 2) {
  ChartProblem p;
  p.v = random_solenoidal(g, seed, band, norm);
  return chart_map(p);
}

double grid_max(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

VelocityOptions tight() {
  VelocityOptions o;
  o.tol = 1e-13;
  return o;
}

}  // namespace

TEST_CASE("jacobian examples") {
  GridSpec g{16};
  const JacobianBundle id = jacobian(DisplacementMap::identity(g));
  for (int e = 0; e < 9; ++e) {
    const double expect = e % 4 == 0 ? 1.0 : 0.0;
    for (std::size_t p = 0; p < g.points(); p += 97) {
      CHECK(id.J_grid[e][p] == cplx(expect));
      CHECK(id.adj_grid[e][p] == cplx(expect));
    }
  }
  CHECK(grid_max(id.det_grid) == 1.0);

  const double eps = 0.05;
  const JacobianBundle sh = jacobian(DisplacementMap{shear(g, eps)});
  const SpectralField j12 = scalar_field(g, [eps](double, double y, double) { return eps * cos(y); });
  CHECK(max_diff(sh.J[1], j12) < 1e-16);
  for (int e : {3, 6, 7}) CHECK(max_abs(sh.J[e]) == 0.0);
  double worst = 0.0;
  for (const cplx& v : sh.det_grid) worst = std::max(worst, std::abs(v - 1.0));
  CHECK(worst < 1e-15);
}

TEST_CASE("adjugate identity J adj = det I on the grid") {
  GridSpec g{32};
  const SpectralField d = cplx(1.0, 0.3) * random_solenoidal(g, 17, 2, 0.05);
  const JacobianBundle b = jacobian(DisplacementMap{d});
  double worst = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += b.J_grid[3 * i + k][p] * b.adj_grid[3 * k + j][p];
        worst = std::max(worst, std::abs(acc - (i == j ? b.det_grid[p] : 0.0)));
      }
  CHECK(worst <= 1e-11);
}

TEST_CASE("pushforward_vorticity examples") {
  GridSpec g{16};
  const SpectralField w = random_solenoidal(g, 3, 3, 1.0);
  CHECK(max_diff(pushforward_vorticity(DisplacementMap::identity(g), w), w) < 1e-15);

  const double eps = 0.05;
  const DisplacementMap sh{shear(g, eps)};
  const SpectralField w3 = vector_field(g, [](double x, double, double) { return std::array<double, 3>{0, 0, cos(x)}; });
  CHECK(max_diff(pushforward_vorticity(sh, w3), w3) < 1e-15);
  const SpectralField w2 = vector_field(g, [](double x, double, double) { return std::array<double, 3>{0, cos(x), 0}; });
  const SpectralField expect = vector_field(g, [eps](double x, double y, double) {
    return std::array<double, 3>{eps * cos(y) * cos(x), cos(x), 0};
  });
  CHECK(max_diff(pushforward_vorticity(sh, w2), expect) < 1e-15);
}

TEST_CASE("conjugated operators reduce to curl and div at the identity") {
  GridSpec g{16};
  const SpectralField U = random_solenoidal(g, 5, 3, 1.0) + gradient(random_scalar(g, 6, 3));
  const DisplacementMap id = DisplacementMap::identity(g);
  CHECK(max_diff(conjugated_curl(id, U), curl(U)) < 1e-12);
  CHECK(max_diff(conjugated_div(id, U), divergence(U)) < 1e-12);
}

TEST_CASE("conjugated operators match finite differences of u = U o g^-1") {
  // Maps whose products stay inside the dealiased band; a chart map needs n = 32 for that.
  for (const int n : {16, 32}) {
    GridSpec g{n};
    const SpectralField U = random_solenoidal(g, 7, 2, 1.0) + gradient(random_scalar(g, 8, 2));
    const DisplacementMap primary = n == 16 ? DisplacementMap{shear(g, 0.05)} : small_chart(g, 9, 0.05);
    const DisplacementMap band1{random_solenoidal(g, 9, 1, 0.05)};
    for (const DisplacementMap& map : {primary, band1}) {
      const SpectralField cc = conjugated_curl(map, U);
      const SpectralField cd = conjugated_div(map, U);
      for (const Point3& x0 : {Point3{0.3, 1.1, 2.0}, Point3{4.0, 0.5, 5.5}, Point3{2.2, 3.3, 0.7}}) {
        const auto du = eulerian_gradient_fd(map, U, x0);
        const std::vector<Point3> at{x0};
        const auto c = eval_at_points(cc, at);
        const auto dv = eval_at_points(cd, at);
        CHECK(std::abs(c[0] - (du[3 * 2 + 1] - du[3 * 1 + 2])) < 1e-6);
        CHECK(std::abs(c[1] - (du[3 * 0 + 2] - du[3 * 2 + 0])) < 1e-6);
        CHECK(std::abs(c[2] - (du[3 * 1 + 0] - du[3 * 0 + 1])) < 1e-6);
        CHECK(std::abs(dv[0] - (du[0] + du[4] + du[8])) < 1e-6);
      }
    }
  }
}

TEST_CASE("conjugated_curl of a pulled-back gradient vanishes") {
  GridSpec g{32};
  const DisplacementMap map = small_chart(g, 10, 0.05);
  // U = (grad psi) o g with psi(y) = sin y1 + cos 2 y2 + sin(y1 + y3).
  const std::vector<Point3> gx = [&] {
    std::vector<Point3> pts = grid_points(g);
    const auto d = eval_at_points(map.d, pts);
    for (std::size_t p = 0; p < pts.size(); ++p)
      for (int c = 0; c < 3; ++c) pts[p][c] += d[3 * p + c];
    return pts;
  }();
  std::vector<cplx> vals(3 * gx.size());
  for (std::size_t p = 0; p < gx.size(); ++p) {
    const cplx y1 = gx[p][0], y2 = gx[p][1], y3 = gx[p][2];
    vals[3 * p + 0] = std::cos(y1) + std::cos(y1 + y3);
    vals[3 * p + 1] = -2.0 * std::sin(2.0 * y2);
    vals[3 * p + 2] = std::cos(y1 + y3);
  }
  const SpectralField U = field_from_points(g, vals, true);
  CHECK(max_abs_on_grid(conjugated_curl(map, U)) < 1e-8);
}

TEST_CASE("conjugated_div examples") {
  GridSpec g{32};
  SpectralField c(g, Rank::vector3);
  c.component(0)[0] = 1.0;
  c.component(2)[0] = -2.0;
  CHECK(max_abs(conjugated_div(small_chart(g, 11, 0.05), c)) < 1e-15);

  // Lagrangian representation of the divergence-free ABC field.
  const DisplacementMap map = small_chart(g, 12, 0.05);
  std::vector<Point3> gx = grid_points(g);
  const auto d = eval_at_points(map.d, gx);
  for (std::size_t p = 0; p < gx.size(); ++p)
    for (int k = 0; k < 3; ++k) gx[p][k] += d[3 * p + k];
  const SpectralField abc = initial_condition(g, {.name = "abc"});
  const SpectralField U = field_from_points(g, eval_at_points(abc, gx), true);
  CHECK(max_abs_on_grid(conjugated_div(map, U)) < 1e-6);
}

TEST_CASE("singular maps are reported") {
  GridSpec g{16};
  const SpectralField d = vector_field(g, [](double x, double, double) { return std::array<double, 3>{sin(x), 0, 0}; });
  CHECK_THROWS_AS(conjugated_curl(DisplacementMap{d}, SpectralField(g, Rank::vector3)), SingularMap);
  CHECK_THROWS_AS(solve_velocity(DisplacementMap{d}, curl(initial_condition(g, {}))), RejectedInput);
  VelocityOptions loose;
  loose.max_gradient = 10.0;
  CHECK_THROWS_AS(solve_velocity(DisplacementMap{d}, curl(initial_condition(g, {})), loose), SingularMap);
}

TEST_CASE("solve_velocity identity reduction") {
  GridSpec g{16};
  for (const char* name : {"taylor_green", "abc"}) {
    InitialCondition ic;
    ic.name = name;
    const SpectralField u0 = initial_condition(g, ic);
    const VelocitySolve sol = solve_velocity(DisplacementMap::identity(g), curl(u0));
    CHECK(sol.iterations == 1);
    CHECK(sobolev_norm(sol.U - u0, kDefaultSobolevIndex) <= 1e-10);
  }
  const SpectralField abc = initial_condition(g, {.name = "abc"});
  CHECK(max_diff(solve_velocity(DisplacementMap::identity(g), abc).U, abc) < 1e-13);
  for (std::uint64_t seed : {1, 2}) {
    const SpectralField w = curl(random_solenoidal(g, seed, 3, 1.0));
    CHECK(sobolev_norm(solve_velocity(DisplacementMap::identity(g), w).U - curl_inv(w), 2.6) <= 1e-10);
  }
}

TEST_CASE("solve_velocity on a chart map") {
  GridSpec g{16};
  ChartProblem cp;
  const double eps = 0.05;
  cp.v = vector_field(g, [eps](double x, double y, double) { return std::array<double, 3>{eps * sin(y), eps * sin(x), 0}; });
  const DisplacementMap map = chart_map(cp);
  const SpectralField w0 = curl(initial_condition(g, {}));
  const VelocitySolve sol = solve_velocity(map, w0);
  CHECK(sol.residual_curl <= 1e-9);
  CHECK(sol.residual_div <= 1e-9);
  CHECK(sol.iterations <= 40);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(mean(sol.U, c)) == 0.0);
  CHECK(max_abs_on_grid(sol.U - composite_velocity(map, w0)) <= 1e-5);

  // On volume-preserving maps the divided form agrees.
  const auto [rc, rd] = conjugated_residuals(map, w0, solve_velocity(map, w0, tight()).U);
  CHECK(rc <= 1e-10);
  CHECK(rd <= 1e-10);
}

TEST_CASE("solve_velocity matches the composite-map oracle at n = 32") {
  GridSpec g{32};
  const DisplacementMap map = small_chart(g, 21, 0.05, 4);
  const SpectralField w0 = curl(0.1 * initial_condition(g, {}));
  const SpectralField U = solve_velocity(map, w0).U;
  CHECK(max_abs_on_grid(U - composite_velocity(map, w0)) <= 1e-4);
}

TEST_CASE("solve_velocity is linear in the vorticity") {
  GridSpec g{16};
  const DisplacementMap map = small_chart(g, 31, 0.05);
  const SpectralField w1 = curl(random_solenoidal(g, 32, 2, 1.0));
  const SpectralField w2 = curl(random_solenoidal(g, 33, 2, 1.0));
  const cplx a(0.7, 0.2), b(-1.3, 0.0);
  const SpectralField lhs = solve_velocity(map, a * w1 + b * w2, tight()).U;
  const SpectralField rhs = a * solve_velocity(map, w1, tight()).U + b * solve_velocity(map, w2, tight()).U;
  CHECK(sobolev_norm(lhs - rhs, 2.6) <= 1e-11);
}

TEST_CASE("residual certificate reproduces the reported residuals") {
  GridSpec g{16};
  const DisplacementMap map{cplx(1.0, 0.5) * random_solenoidal(g, 41, 2, 0.05)};
  const SpectralField w0 = curl(random_solenoidal(g, 42, 2, 1.0));
  const VelocitySolve sol = solve_velocity(map, w0);
  const auto [rc, rd] = velocity_residuals(map, w0, sol.U);
  CHECK(std::abs(rc - sol.residual_curl) <= 1e-12);
  CHECK(std::abs(rd - sol.residual_div) <= 1e-12);
  CHECK(sol.residual_curl <= 1e-10);
  CHECK(sol.residual_div <= 1e-10);
}

TEST_CASE("det-free solve converges where det J drifts from 1") {
  // Not volume-preserving: the divided system has no exact solution here,
  // the det-free one converges to roundoff.
  GridSpec g{16};
  const DisplacementMap map{0.01 * initial_condition(g, {.name = "abc"})};
  const SpectralField w0 = curl(0.1 * initial_condition(g, {}));
  const VelocitySolve sol = solve_velocity(map, w0, tight());
  CHECK(sol.residual_curl <= 1e-13);
  for (std::size_t i = 2; i < sol.history.size(); ++i) CHECK(sol.history[i] < sol.history[i - 1]);
}

TEST_CASE("solve_velocity is complex-differentiable in a complex displacement") {
  GridSpec g{16};
  const SpectralField dr = random_solenoidal(g, 51, 2, 0.05);
  const SpectralField di = random_solenoidal(g, 52, 2, 0.05);
  const SpectralField w0 = curl(0.1 * initial_condition(g, {}));
  auto U = [&](cplx eps) { return solve_velocity(DisplacementMap{dr + eps * di}, w0, tight()).U; };
  const double h = 1e-3;
  const SpectralField dx = (1.0 / (2.0 * h)) * (U(h) - U(-h));
  const SpectralField dy = (1.0 / (2.0 * h)) * (U(cplx(0, h)) - U(cplx(0, -h)));
  const double defect = sobolev_norm(dy - cplx(0.0, 1.0) * dx, 2.6) / sobolev_norm(dx, 2.6);
  CHECK(defect <= 1e-6);
}

TEST_CASE("solve_velocity errors") {
  GridSpec g{16};
  const DisplacementMap map = small_chart(g, 61, 0.05);
  VelocityOptions o;
  o.max_iter = 1;
  try {
    solve_velocity(map, curl(initial_condition(g, {})), o);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.history().size() == 2);
  }
  const SpectralField grad = gradient(scalar_field(g, [](double x, double, double) { return cos(x); }));
  CHECK_THROWS_AS(solve_velocity(map, grad), RejectedInput);
  CHECK_THROWS_AS(solve_velocity(map, SpectralField(GridSpec{8}, Rank::vector3)), ContractViolation);
}

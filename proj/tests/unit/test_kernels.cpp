#include <random>

#ifdef EULER_LAB_HAVE_OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "euler_lab/kernels.hpp"
#include "test_support.hpp"

using namespace euler_lab;
using namespace euler_lab::kernels;

namespace {

constexpr std::size_t kN = 4099;

struct Arrays {
  std::vector<std::vector<cplx>> data;
  explicit Arrays(int count, std::uint64_t seed) : data(count, std::vector<cplx>(kN)) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (auto& v : data)
      for (auto& x : v) x = {normal(rng), normal(rng)};
  }
  In in(int i) const { return data[i]; }
  Out out(int i) { return data[i]; }
};

MatIn mat_in(const Arrays& a, int first) {
  MatIn m;
  for (int e = 0; e < 9; ++e) m[e] = a.in(first + e);
  return m;
}

MatOut mat_out(Arrays& a, int first) {
  MatOut m;
  for (int e = 0; e < 9; ++e) m[e] = a.out(first + e);
  return m;
}

bool same(const std::vector<cplx>& a, const std::vector<cplx>& b) { return a == b; }

struct Threads {
  Threads() {
#ifdef EULER_LAB_HAVE_OPENMP
    omp_set_num_threads(4);
#endif
  }
};

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  Threads threads;
  const Arrays src(20, 7);
  Arrays s(16, 0), p(16, 0);

  serial::product(src.in(0), src.in(1), s.out(0));
  parallel::product(src.in(0), src.in(1), p.out(0));
  CHECK(same(s.data[0], p.data[0]));

  s.data[1] = src.data[2];
  p.data[1] = src.data[2];
  serial::axpy({0.5, -1.0}, src.in(3), s.out(1));
  parallel::axpy({0.5, -1.0}, src.in(3), p.out(1));
  CHECK(same(s.data[1], p.data[1]));

  serial::adjugate(mat_in(src, 0), mat_out(s, 2));
  parallel::adjugate(mat_in(src, 0), mat_out(p, 2));
  for (int e = 0; e < 9; ++e) CHECK(same(s.data[2 + e], p.data[2 + e]));

  serial::determinant_from_adjugate(mat_in(src, 0), mat_in(s, 2), s.out(11));
  parallel::determinant_from_adjugate(mat_in(src, 0), mat_in(p, 2), p.out(11));
  CHECK(same(s.data[11], p.data[11]));

  serial::principal_minor_sum(mat_in(src, 0), s.out(12));
  parallel::principal_minor_sum(mat_in(src, 0), p.out(12));
  CHECK(same(s.data[12], p.data[12]));

  const VecIn w{src.in(9), src.in(10), src.in(11)};
  serial::matvec(mat_in(src, 0), w, {s.out(13), s.out(14), s.out(15)});
  parallel::matvec(mat_in(src, 0), w, {p.out(13), p.out(14), p.out(15)});
  for (int c = 13; c < 16; ++c) CHECK(same(s.data[c], p.data[c]));

  const VecIn a{src.in(12), src.in(13), src.in(14)};
  serial::cross(a, w, {s.out(0), s.out(1), s.out(2)});
  parallel::cross(a, w, {p.out(0), p.out(1), p.out(2)});
  for (int c = 0; c < 3; ++c) CHECK(same(s.data[c], p.data[c]));

  serial::conjugated_contract(mat_in(src, 0), mat_in(src, 9), src.in(18), {s.out(3), s.out(4), s.out(5)}, s.out(6));
  parallel::conjugated_contract(mat_in(src, 0), mat_in(src, 9), src.in(18), {p.out(3), p.out(4), p.out(5)},
                                p.out(6));
  for (int c = 3; c < 7; ++c) CHECK(same(s.data[c], p.data[c]));
}

TEST_CASE("adjugate identity M adj = det I") {
  const Arrays src(9, 8);
  Arrays out(10, 0);
  serial::adjugate(mat_in(src, 0), mat_out(out, 0));
  serial::determinant_from_adjugate(mat_in(src, 0), mat_in(out, 0), out.out(9));
  double worst = 0.0;
  for (std::size_t q = 0; q < kN; ++q)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += src.data[3 * i + k][q] * out.data[3 * k + j][q];
        worst = std::max(worst, std::abs(acc - (i == j ? out.data[9][q] : 0.0)));
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("principal minors, cross product and contraction on fixed matrices") {
  // M = [[1,2,3],[4,5,6],[7,8,10]]: minors (5-8)+(10-21)+(50-48) = -12, det = -3.
  const double m[9] = {1, 2, 3, 4, 5, 6, 7, 8, 10};
  std::vector<std::vector<cplx>> cols(9, std::vector<cplx>(1));
  for (int e = 0; e < 9; ++e) cols[e][0] = m[e];
  MatIn mi;
  for (int e = 0; e < 9; ++e) mi[e] = cols[e];
  std::vector<cplx> minors(1), det(1);
  std::vector<std::vector<cplx>> adj(9, std::vector<cplx>(1));
  MatOut ao;
  MatIn ai;
  for (int e = 0; e < 9; ++e) {
    ao[e] = adj[e];
    ai[e] = adj[e];
  }
  serial::principal_minor_sum(mi, minors);
  serial::adjugate(mi, ao);
  serial::determinant_from_adjugate(mi, ai, det);
  CHECK(minors[0] == cplx(-12.0));
  CHECK(det[0] == cplx(-3.0));

  std::vector<cplx> e1{1.0}, e2{0.0}, e3{0.0}, f1{0.0}, f2{1.0}, f3{0.0}, o1(1), o2(1), o3(1);
  serial::cross({e1, e2, e3}, {f1, f2, f3}, {o1, o2, o3});
  CHECK(o1[0] == cplx(0.0));
  CHECK(o2[0] == cplx(0.0));
  CHECK(o3[0] == cplx(1.0));

  // With adj = I and det = 1 the contraction is the plain curl and divergence.
  std::vector<std::vector<cplx>> id(9, std::vector<cplx>(1, 0.0));
  id[0][0] = id[4][0] = id[8][0] = 1.0;
  MatIn idi;
  for (int e = 0; e < 9; ++e) idi[e] = id[e];
  std::vector<cplx> one{1.0}, c1(1), c2(1), c3(1), dv(1);
  serial::conjugated_contract(mi, idi, one, {c1, c2, c3}, dv);
  // grad_u(k,m) = M: curl_i = eps_ijk M(k,j).
  CHECK(c1[0] == cplx(m[7] - m[5]));
  CHECK(c2[0] == cplx(m[2] - m[6]));
  CHECK(c3[0] == cplx(m[3] - m[1]));
  CHECK(dv[0] == cplx(16.0));
}

TEST_CASE("evaluate kernels agree with each other and with grid values") {
  Threads threads;
  GridSpec g{16};
  const SpectralField u = testing_support::random_solenoidal(g, 3, 4, 1.0);
  const CompactSpectrum spec = compact(u);
  std::vector<Point3> pts;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> x(0.0, 6.0);
  for (int i = 0; i < 37; ++i) pts.push_back({cplx(x(rng), 0.1 * x(rng)), x(rng), cplx(x(rng), -0.05)});
  std::vector<cplx> s(3 * pts.size()), p(3 * pts.size());
  serial::evaluate(spec, pts, s);
  parallel::evaluate(spec, pts, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - p[i]));
  CHECK(worst == 0.0);

  // Direct sum at one complex point.
  cplx direct = 0.0;
  const int c = 1;
  for (int k1 = -8; k1 < 8; ++k1)
    for (int k2 = -8; k2 < 8; ++k2)
      for (int k3 = -8; k3 < 8; ++k3)
        direct += u.mode(c, k1, k2, k3) * std::exp(cplx(0.0, 1.0) * (double(k1) * pts[5][0] + double(k2) * pts[5][1] +
                                                                    double(k3) * pts[5][2]));
  CHECK(std::abs(direct - s[3 * 5 + c]) < 1e-12);
}

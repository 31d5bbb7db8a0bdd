// Serial reference kernels against their OpenMP counterparts on n^3 grids.

#include <benchmark/benchmark.h>

#include <random>

#include "euler_lab/kernels.hpp"
#include "euler_lab/spectral_ops.hpp"

namespace {

using namespace euler_lab;
namespace kn = euler_lab::kernels;

struct Buffers {
  std::vector<std::vector<cplx>> data;

  Buffers(std::size_t count, std::size_t size) : data(count, std::vector<cplx>(size)) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    for (auto& v : data)
      for (auto& x : v) x = {normal(rng), normal(rng)};
  }
  template <std::size_t N>
  std::array<kn::In, N> in(std::size_t first) const {
    std::array<kn::In, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = data[first + i];
    return out;
  }
  template <std::size_t N>
  std::array<kn::Out, N> out(std::size_t first) {
    std::array<kn::Out, N> o;
    for (std::size_t i = 0; i < N; ++i) o[i] = data[first + i];
    return o;
  }
};

std::size_t points(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  return n * n * n;
}

template <bool Parallel>
void BM_Adjugate(benchmark::State& state) {
  Buffers b(18, points(state));
  const auto m = b.in<9>(0);
  const auto adj = b.out<9>(9);
  for (auto _ : state) {
    if constexpr (Parallel) kn::parallel::adjugate(m, adj);
    else kn::serial::adjugate(m, adj);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points(state)));
}

template <bool Parallel>
void BM_Matvec(benchmark::State& state) {
  Buffers b(15, points(state));
  const auto m = b.in<9>(0);
  const auto w = b.in<3>(9);
  const auto o = b.out<3>(12);
  for (auto _ : state) {
    if constexpr (Parallel) kn::parallel::matvec(m, w, o);
    else kn::serial::matvec(m, w, o);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points(state)));
}

template <bool Parallel>
void BM_ConjugatedContract(benchmark::State& state) {
  Buffers b(23, points(state));
  const auto g = b.in<9>(0);
  const auto adj = b.in<9>(9);
  const kn::In det = b.data[18];
  const auto curl = b.out<3>(19);
  const kn::Out div = b.data[22];
  for (auto _ : state) {
    if constexpr (Parallel) kn::parallel::conjugated_contract(g, adj, det, curl, div);
    else kn::serial::conjugated_contract(g, adj, det, curl, div);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points(state)));
}

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  const GridSpec g{static_cast<int>(state.range(0))};
  SpectralField f(g, Rank::vector3);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int c = 0; c < 3; ++c)
    for (int k1 = -3; k1 <= 3; ++k1)
      for (int k2 = -3; k2 <= 3; ++k2)
        for (int k3 = -3; k3 <= 3; ++k3) f.set_mode(c, k1, k2, k3, {normal(rng), normal(rng)});
  const kn::CompactSpectrum spec = kn::compact(f);
  std::uniform_real_distribution<double> u(0.0, 6.28);
  std::vector<Point3> pts(256);
  for (auto& p : pts) p = {cplx(u(rng), 0.1), cplx(u(rng), -0.1), cplx(u(rng), 0.0)};
  std::vector<cplx> out(3 * pts.size());
  for (auto _ : state) {
    if constexpr (Parallel) kn::parallel::evaluate(spec, pts, out);
    else kn::serial::evaluate(spec, pts, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK(BM_Adjugate<false>)->Name("adjugate/serial")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Adjugate<true>)->Name("adjugate/parallel")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Matvec<false>)->Name("matvec/serial")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Matvec<true>)->Name("matvec/parallel")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_ConjugatedContract<false>)->Name("conjugated_contract/serial")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_ConjugatedContract<true>)->Name("conjugated_contract/parallel")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_Evaluate<false>)->Name("evaluate/serial")->Arg(16);
BENCHMARK(BM_Evaluate<true>)->Name("evaluate/parallel")->Arg(16);

BENCHMARK_MAIN();

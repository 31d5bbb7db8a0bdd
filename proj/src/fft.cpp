#include "euler_lab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace euler_lab::fft {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Planning is not thread-safe in FFTW; execution on new arrays is.
std::mutex plan_mutex;

const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const std::size_t size = static_cast<std::size_t>(n) * n * n;
  std::vector<cplx> a(size), b(size);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.forward = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_BACKWARD, flags);
  return cache.emplace(n, p).first->second;
}

void check(const GridSpec& grid, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != grid.points() || out.size() != grid.points())
    throw ContractViolation("fft: buffer size does not match grid");
  if (in.data() == out.data()) throw ContractViolation("fft: in-place transform not supported");
}

}  // namespace

void forward(const GridSpec& grid, std::span<const cplx> in, std::span<cplx> out) {
  check(grid, in, out);
  const PlanPair& p = plans_for(grid.n);
  // Out-of-place complex DFTs preserve their input.
  fftw_execute_dft(p.forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.points());
  for (auto& v : out) v *= scale;
}

void backward(const GridSpec& grid, std::span<const cplx> in, std::span<cplx> out) {
  check(grid, in, out);
  const PlanPair& p = plans_for(grid.n);
  fftw_execute_dft(p.backward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace euler_lab::fft

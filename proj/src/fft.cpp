#include "qhdlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace qhd::fft {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

AlignedBuffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return AlignedBuffer(p);
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// The FFTW planner is not reentrant; fftw_execute_dft on an existing plan is.
std::mutex planner_mutex;

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  AlignedBuffer scratch = allocate(n);
  const int len = static_cast<int>(n);
  PlanPair p;
  p.forward = fftw_plan_dft_1d(len, scratch.get(), scratch.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  p.inverse = fftw_plan_dft_1d(len, scratch.get(), scratch.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (p.forward == nullptr || p.inverse == nullptr) throw std::runtime_error("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

void execute(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  const PlanPair plans = plans_for(n);

  // Per-thread aligned scratch so every call hits the same SIMD codelets.
  thread_local AlignedBuffer scratch;
  thread_local std::size_t scratch_size = 0;
  if (scratch_size != n) {
    scratch = allocate(n);
    scratch_size = n;
  }
  auto* buf = reinterpret_cast<std::complex<double>*>(scratch.get());
  std::copy(data.begin(), data.end(), buf);
  fftw_execute_dft(inverse ? plans.inverse : plans.forward, scratch.get(), scratch.get());
  std::copy(buf, buf + n, data.begin());
}

}  // namespace

void forward(std::span<std::complex<double>> data) { execute(data, false); }
void inverse(std::span<std::complex<double>> data) { execute(data, true); }

}  // namespace qhd::fft

#include "acwave/fft.hpp"

#include "acwave/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace acwave::fft {
namespace {

std::mutex g_plan_mutex;

std::map<std::pair<std::vector<int>, int>, fftw_plan>& plan_cache() {
  static std::map<std::pair<std::vector<int>, int>, fftw_plan> cache;
  return cache;
}

fftw_plan plan_for(int rank, const int* dims, int direction) {
  std::pair<std::vector<int>, int> key{std::vector<int>(dims, dims + rank),
                                       direction};
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  long total = 1;
  for (int r = 0; r < rank; ++r) total *= dims[r];
  // scratch buffer used only while planning; FFTW_UNALIGNED keeps the plan
  // valid for any caller buffer afterwards
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(total));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(rank, dims, buf, buf, direction,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw NumericalError("fft: plan creation failed");
  cache.emplace(std::move(key), plan);
  return plan;
}

}  // namespace

void dft_slices(std::complex<double>* data, int rank, const int* dims,
                long n_slices, int direction) {
  if (data == nullptr) throw ValidationError("fft: null data");
  if (rank < 1) throw ValidationError("fft: rank must be >= 1");
  if (direction != kForward && direction != kBackward)
    throw ValidationError("fft: direction must be -1 or +1");
  long total = 1;
  for (int r = 0; r < rank; ++r) {
    if (dims[r] < 1) throw ValidationError("fft: dims must be positive");
    total *= dims[r];
  }
  fftw_plan plan = plan_for(rank, dims, direction);
  for (long s = 0; s < n_slices; ++s) {
    auto* buf = reinterpret_cast<fftw_complex*>(data + s * total);
    fftw_execute_dft(plan, buf, buf);
  }
}

}  // namespace acwave::fft

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace latbump::detail {
namespace {

// The FFTW planner is not re-entrant; execution on new arrays is.
std::mutex g_plan_mutex;

fftw_plan get_plan(int dim, int len, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard lock(g_plan_mutex);
  auto key = std::make_tuple(dim, len, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::vector<int> dims(dim, len);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(len);
  auto* scratch = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(dim, dims.data(), scratch, scratch,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!plan) throw std::runtime_error("fftw: planning failed");
  cache.emplace(key, plan);
  return plan;
}

void roll_half(std::vector<cplx>& data, int dim, int len) {
  const int half = len / 2;
  if (dim == 1) {
    for (int i = 0; i < half; ++i) std::swap(data[i], data[i + half]);
    return;
  }
  for (int i = 0; i < len; ++i) {
    const int ii = (i + half) % len;
    if (ii < i) continue;
    for (int j = 0; j < len; ++j) {
      const int jj = (j + half) % len;
      std::swap(data[static_cast<std::size_t>(i) * len + j],
                data[static_cast<std::size_t>(ii) * len + jj]);
    }
  }
}

// (-1)^(sum of indices) checkerboard; centering for any number of axes.
void checkerboard(std::vector<cplx>& data, int dim, int len) {
  std::vector<int> idx(dim, 0);
  for (auto& v : data) {
    int parity = 0;
    for (int i : idx) parity += i;
    if (parity & 1) v = -v;
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < len) break;
      idx[d] = 0;
    }
  }
}

}  // namespace

void fft_inplace(std::vector<cplx>& data, int dim, int len, int sign) {
  fftw_plan plan = get_plan(dim, len, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

void centered_fft_inplace(std::vector<cplx>& data, int dim, int len, int sign) {
  if (len % 2 != 0) throw std::invalid_argument("centered_fft: length must be even");
  if (dim <= 2) {
    roll_half(data, dim, len);
    fft_inplace(data, dim, len, sign);
    roll_half(data, dim, len);
    return;
  }
  // (j - N/2)(k - N/2) = jk - N/2 (j + k) + N^2/4 on every axis.
  checkerboard(data, dim, len);
  fft_inplace(data, dim, len, sign);
  checkerboard(data, dim, len);
  if ((len / 2) % 2 == 1 && dim % 2 == 1)
    for (auto& v : data) v = -v;
}

}  // namespace latbump::detail

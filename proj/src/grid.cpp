#include "latbump/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace latbump {

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int d = 0; d < n_; ++d) total *= static_cast<std::size_t>(points());
  return total;
}

int GridSpec::wrap(int k) const {
  const int N = points();
  int i = (k + N / 2) % N;
  return i < 0 ? i + N : i;
}

std::size_t GridSpec::flat(const IntVec& idx) const {
  if (n_ == 1) return static_cast<std::size_t>(idx[0]);
  return static_cast<std::size_t>(idx[0]) * points() + idx[1];
}

IntVec GridSpec::unflat(std::size_t f) const {
  if (n_ == 1) return {static_cast<int>(f), 0};
  const auto N = static_cast<std::size_t>(points());
  return {static_cast<int>(f / N), static_cast<int>(f % N)};
}

GridSpec make_grid(int n, int L, int s) {
  if (n != 1 && n != 2) throw std::invalid_argument("make_grid: dimension must be 1 or 2");
  if (L <= 0 || L % 2 != 0) throw std::invalid_argument("make_grid: box side L must be even and positive");
  if (s <= 0) throw std::invalid_argument("make_grid: samples per unit must be positive");
  const double total = std::pow(static_cast<double>(L) * s, n);
  if (total > static_cast<double>(kMaxGridPoints))
    throw std::invalid_argument("make_grid: grid exceeds 2^24 points (N^n = " +
                                std::to_string(static_cast<long long>(total)) + ")");
  GridSpec g;
  g.n_ = n;
  g.L_ = L;
  g.s_ = s;
  return g;
}

GridFunction GridFunction::zeros(const GridSpec& spec, Side side) {
  return {spec, side, std::vector<cplx>(spec.size())};
}

std::array<double, 2> GridFunction::coord(std::size_t f) const {
  const IntVec idx = spec.unflat(f);
  std::array<double, 2> c{0.0, 0.0};
  for (int d = 0; d < spec.dim(); ++d)
    c[d] = side == Side::space ? spec.space_coord(idx[d]) : spec.freq_coord(idx[d]);
  return c;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples) m = std::max(m, std::abs(v));
  return m;
}

GridFunction dft(const GridFunction& f) {
  if (f.side != Side::space) throw std::invalid_argument("dft: input must be a space-side function");
  GridFunction out{f.spec, Side::frequency, f.samples};
  detail::centered_fft_inplace(out.samples, f.spec.dim(), f.spec.points(), -1);
  const double w = std::pow(f.spec.step(), f.spec.dim());
  for (auto& v : out.samples) v *= w;
  return out;
}

GridFunction idft(const GridFunction& F) {
  if (F.side != Side::frequency) throw std::invalid_argument("idft: input must be a frequency-side function");
  GridFunction out{F.spec, Side::space, F.samples};
  detail::centered_fft_inplace(out.samples, F.spec.dim(), F.spec.points(), +1);
  const double w = std::pow(F.spec.freq_step(), F.spec.dim());
  for (auto& v : out.samples) v *= w;
  return out;
}

std::pair<cplx, cplx> poisson_check(const GridFunction& f, const IntVec& xi_index,
                                    const IntVec& x_index, int M) {
  // xi_index and x_index are centered integer coordinates.
  if (f.side != Side::space) throw std::invalid_argument("poisson_check: input must be space-side");
  const GridSpec& g = f.spec;
  const int n = g.dim();
  if (M < 0 || 2 * M > std::max(g.box(), g.rate()))
    throw std::invalid_argument("poisson_check: truncation radius exceeds the grid");
  for (int d = 0; d < n; ++d)
    if (!g.in_range(xi_index[d]) || !g.in_range(x_index[d]))
      throw std::invalid_argument("poisson_check: evaluation point off the grid");

  const GridFunction fhat = dft(f);
  const int L = g.box(), s = g.rate();
  const IntVec lo{-M, n == 2 ? -M : 0}, hi{M, n == 2 ? M : 0};
  const auto shifts = lattice_box(n, lo, hi);

  // Exponent phases are reduced with exact integer arithmetic first: x.mu is
  // (j/s) mu and xi.(x+nu) is (k/L)(j + nu s)/s.
  auto unit = [](long long num, long long den) {
    long long r = num % den;
    if (r < 0) r += den;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
  };

  cplx lhs{}, rhs{};
  for (const auto& mu : shifts) {
    IntVec k{};
    bool inside = true;
    for (int d = 0; d < n; ++d) {
      k[d] = xi_index[d] + mu[d] * L;
      inside = inside && g.in_range(k[d]);
    }
    if (!inside) continue;
    long long num = 0;
    for (int d = 0; d < n; ++d) num += static_cast<long long>(x_index[d]) * mu[d];
    IntVec idx{g.wrap(k[0]), n == 2 ? g.wrap(k[1]) : 0};
    lhs += unit(num, s) * fhat[g.flat(idx)];
  }
  for (const auto& nu : shifts) {
    IntVec j{};
    bool inside = true;
    for (int d = 0; d < n; ++d) {
      j[d] = x_index[d] + nu[d] * s;
      inside = inside && g.in_range(j[d]);
    }
    if (!inside) continue;
    long long num = 0;
    for (int d = 0; d < n; ++d) num -= static_cast<long long>(xi_index[d]) * j[d];
    IntVec idx{g.wrap(j[0]), n == 2 ? g.wrap(j[1]) : 0};
    rhs += unit(num, static_cast<long long>(L) * s) * f[g.flat(idx)];
  }
  return {lhs, rhs};
}

}  // namespace latbump

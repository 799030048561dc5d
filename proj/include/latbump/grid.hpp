// Periodic sampling of R^n on the box [-L/2, L/2)^n and the matching
// discrete Fourier pair.
//
// Conventions: fhat(xi) = int f(x) e^{-2 pi i x.xi} dx, realized as
// h^n * sum over grid points with h = 1/s; the inverse carries the weight
// (1/L)^n. Both sides use centered indexing: storage index i on an axis
// corresponds to the integer coordinate k = i - N/2, i.e. x = k h on the
// space side and xi = k / L on the frequency side. For n = 2 the layout is
// row-major with axis 0 slowest.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latbump/lattice.hpp"

namespace latbump {

class GridSpec {
 public:
  GridSpec() = default;

  int dim() const { return n_; }
  int box() const { return L_; }
  int rate() const { return s_; }
  /// Points per axis, N = L s.
  int points() const { return L_ * s_; }
  /// Total number of samples N^n.
  std::size_t size() const;
  double step() const { return 1.0 / s_; }
  double freq_step() const { return 1.0 / L_; }

  /// Centered integer coordinate of storage index i on one axis.
  int centered(int i) const { return i - points() / 2; }
  /// Storage index of a centered coordinate, wrapped periodically.
  int wrap(int k) const;
  bool in_range(int k) const { return k >= -points() / 2 && k < points() / 2; }

  double space_coord(int i) const { return centered(i) * step(); }
  double freq_coord(int i) const { return centered(i) * freq_step(); }

  /// Flat index of per-axis storage indices.
  std::size_t flat(const IntVec& idx) const;
  /// Per-axis storage indices of a flat index.
  IntVec unflat(std::size_t f) const;

  bool operator==(const GridSpec&) const = default;

 private:
  friend GridSpec make_grid(int n, int L, int s);
  int n_ = 1;
  int L_ = 2;
  int s_ = 1;
};

/// Largest allowed N^n.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

/// Validates n in {1,2}, even positive L, positive s and N^n <= 2^24.
GridSpec make_grid(int n, int L, int s);

enum class Side { space, frequency };

struct GridFunction {
  GridSpec spec;
  Side side = Side::space;
  std::vector<cplx> samples;

  static GridFunction zeros(const GridSpec& spec, Side side);
  /// Samples a callable at every grid point of the requested side.
  template <class F>
  static GridFunction sample(const GridSpec& spec, Side side, F&& fn);

  cplx& operator[](std::size_t i) { return samples[i]; }
  const cplx& operator[](std::size_t i) const { return samples[i]; }
  /// Coordinates of grid point f on this function's side.
  std::array<double, 2> coord(std::size_t f) const;
  double max_abs() const;
};

GridFunction dft(const GridFunction& f);
GridFunction idft(const GridFunction& F);

/// Poisson summation at a grid frequency xi = k/L and grid point x = j h,
/// given by the centered integers k and j:
///   lhs = sum_{|mu|_inf <= M} e^{2 pi i mu.x} fhat(xi + mu)
///   rhs = sum_{|nu|_inf <= M} e^{-2 pi i xi.(x + nu)} f(x + nu)
/// Terms that leave the frequency box or the space box are skipped; M may
/// not exceed max(L, s) / 2.
std::pair<cplx, cplx> poisson_check(const GridFunction& f, const IntVec& k, const IntVec& j, int M);

template <class F>
GridFunction GridFunction::sample(const GridSpec& spec, Side side, F&& fn) {
  GridFunction out = zeros(spec, side);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const auto c = out.coord(i);
    out.samples[i] = fn(std::span<const double>(c.data(), static_cast<std::size_t>(spec.dim())));
  }
  return out;
}

}  // namespace latbump

// Lattice bump symbols sigma_{a,Phi}(xi1, xi2) = sum a(mu1, mu2) Phi(xi1 - mu1, xi2 - mu2)
// and the tensor-product Fourier series of Phi over a period box K Q x K Q.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "latbump/bumps.hpp"
#include "latbump/grid.hpp"
#include "latbump/lattice.hpp"

namespace latbump {

/// Symbol samples on pairs of frequency grid points. Flat layout
/// samples[f1 * spec.size() + f2], f_j the flat frequency index of xi_j.
struct SymbolGrid {
  GridSpec spec;
  std::vector<cplx> samples;

  static SymbolGrid zeros(const GridSpec& spec);
  cplx& at(std::size_t f1, std::size_t f2) { return samples[f1 * spec.size() + f2]; }
  const cplx& at(std::size_t f1, std::size_t f2) const { return samples[f1 * spec.size() + f2]; }
  double max_abs() const;
};

/// Largest number of samples a SymbolGrid may hold.
inline constexpr std::size_t kMaxSymbolSamples = std::size_t{1} << 24;

/// Exact grid sampling of sigma_{a,Phi}. Every translated support box must
/// sit strictly inside the frequency box [-s/2, s/2)^{2n}.
SymbolGrid synth_sigma(const LatticeCoefficients& a, const BumpProfile& phi, const GridSpec& spec);

/// Maximum number of translated supports of Phi covering one point.
int overlap_count(const LatticeCoefficients& a, const BumpProfile& phi);

struct CMDecomposition {
  int n = 1;
  double K = 2.0;
  int M = 0;
  /// phi: 1 on the sup-ball K/4, supported in the closed sup-ball K/2.
  BumpProfile cutoff;
  /// Dense b(k1, k2) for |k|_inf <= M; 2n axes (k1 then k2), each of
  /// length 2M+1, row-major.
  std::vector<cplx> coeffs;
  /// sum over |k|_inf > M of |b(k)|, from the full quadrature spectrum.
  double tail_bound = 0.0;
  int quadrature_points = 0;
  bool separable = false;

  int side() const { return 2 * M + 1; }
  std::size_t index(const IntVec& k1, const IntVec& k2) const;
  cplx at(const IntVec& k1, const IntVec& k2) const;
  /// sum over all stored k of |b(k)|.
  double abs_sum() const;
};

/// Smallest admissible period: 2 * ceil(2 * max_i(|c_i| + r_i)).
int default_period(const BumpProfile& phi);

/// Default truncation: 128 for n = 1, 8 for n = 2.
int default_truncation(int n);

/// b(k1,k2) = K^{-2n} iint_{KQ x KQ} Phi e^{-2 pi i K^{-1}(xi1.k1 + xi2.k2)} by the
/// trapezoid rule with at least 4(2M+1) nodes per axis. K must be an even
/// positive integer; K <= 0 selects default_period. quad_points <= 0 picks
/// the node count automatically.
CMDecomposition cm_decompose(const BumpProfile& phi, int K, int M, int quad_points = 0);

/// sum_{|k| <= M} b(k) e^{2 pi i K^{-1} xi.k} phi(xi1) phi(xi2), xi of length 2n.
cplx cm_reconstruct(const CMDecomposition& d, std::span<const double> xi);

/// sigma_{a,Phi} assembled from the truncated series, one translate per mu.
SymbolGrid sigma_from_cm(const LatticeCoefficients& a, const CMDecomposition& d, const GridSpec& spec);

}  // namespace latbump

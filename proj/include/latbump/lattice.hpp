// Finitely supported data on the integer lattice Z^n (n = 1 or 2).
#pragma once

#include <array>
#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace latbump {

using cplx = std::complex<double>;

/// Point of Z^n. Components beyond the active dimension are kept at zero so
/// that ordering and equality stay consistent for n = 1.
using IntVec = std::array<int, 2>;

inline IntVec operator+(const IntVec& a, const IntVec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline IntVec operator-(const IntVec& a, const IntVec& b) { return {a[0] - b[0], a[1] - b[1]}; }

int sup_norm(const IntVec& v);

/// Finitely supported b : Z^n -> C.
struct Sequence {
  int n = 1;
  std::map<IntVec, cplx> entries;

  cplx at(const IntVec& mu) const;
  std::vector<IntVec> support() const;
};

/// Fourier-coefficient description of a trigonometric polynomial on T^n,
/// F(x) = sum_mu c(mu) exp(2 pi i mu.x).
struct TrigPolynomial {
  int n = 1;
  std::map<IntVec, cplx> coeffs;

  cplx eval(std::span<const double> x) const;
  Sequence as_sequence() const { return {n, coeffs}; }
  static TrigPolynomial from_sequence(const Sequence& s) { return {s.n, s.entries}; }
};

using LatticePair = std::pair<IntVec, IntVec>;

/// Finitely supported multiplier coefficients a : Z^n x Z^n -> C.
struct LatticeCoefficients {
  int n = 1;
  std::map<LatticePair, cplx> entries;

  cplx at(const IntVec& mu1, const IntVec& mu2) const;
  double sup_abs() const;
  /// Largest |mu_j|_inf over the support.
  int support_radius() const;
  /// Distinct first (j = 0) or second (j = 1) components of the support.
  std::vector<IntVec> projection(int j) const;
  bool empty() const { return entries.empty(); }

  static LatticeCoefficients delta(int n, const IntVec& mu1 = {0, 0}, const IntVec& mu2 = {0, 0},
                                   cplx value = 1.0);
};

LatticeCoefficients scaled(const LatticeCoefficients& a, cplx c);

/// Lattice points of the box [lo, hi] (inclusive, per active axis), lexicographic.
std::vector<IntVec> lattice_box(int n, const IntVec& lo, const IntVec& hi);

}  // namespace latbump

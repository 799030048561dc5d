// Bilinear and linear Fourier multiplier operators on the grid torus, and the
// periodic and sequence models.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latbump/bumps.hpp"
#include "latbump/grid.hpp"
#include "latbump/lattice.hpp"
#include "latbump/symbols.hpp"

namespace latbump {

using FreqFn = std::function<cplx(std::span<const double>)>;

struct OperatorDiagnostics {
  /// Energy share of sigma f1hat f2hat products whose output frequency
  /// xi1 + xi2 left the frequency box and was wrapped. A warning is added
  /// above 1e-20.
  double aliased_fraction = 0.0;
  std::vector<std::string> warnings;
};

/// T_sigma(f1,f2)(x) = (1/L)^{2n} sum sigma(xi1,xi2) f1hat(xi1) f2hat(xi2) e^{2 pi i x.(xi1+xi2)},
/// grouped by zeta = xi1 + xi2 (cyclic on the frequency box).
GridFunction apply_T_sigma(const SymbolGrid& sigma, const GridFunction& f1, const GridFunction& f2,
                           OperatorDiagnostics* diag = nullptr);

/// T_sigma with sigma given as a function on R^n x R^n, evaluated only at
/// pairs of nonzero frequency samples. Space-side inputs are transformed
/// first; frequency-side inputs are used as given, so exact zeros stay zero.
GridFunction apply_T_symbol(const FreqFn& sigma, const GridFunction& f1, const GridFunction& f2,
                            OperatorDiagnostics* diag = nullptr);

/// T_{a,Phi} through the truncated tensor expansion of Phi:
///   sum_k b(k1,k2) sum_mu a(mu1,mu2) [phi_{k1}(D - mu1) f1] [phi_{k2}(D - mu2) f2].
GridFunction apply_T_aPhi_fast(const LatticeCoefficients& a, const CMDecomposition& d,
                               const GridFunction& f1, const GridFunction& f2);

/// S_a(b1,b2)(mu) = sum_{mu1+mu2=mu} a(mu1,mu2) b1(mu1) b2(mu2).
Sequence apply_S(const LatticeCoefficients& a, const Sequence& b1, const Sequence& b2);

/// Coefficients of T^period_a(F1,F2), i.e. S_a of the coefficient maps.
TrigPolynomial apply_T_period(const LatticeCoefficients& a, const TrigPolynomial& F1, const TrigPolynomial& F2);

/// idft(m . dft(f)).
GridFunction apply_linear_mult(const FreqFn& m, const GridFunction& f);
GridFunction apply_linear_mult(const GridFunction& m, const GridFunction& f);
GridFunction apply_linear_mult(const Window& kappa, const GridFunction& f);
GridFunction apply_linear_mult(const BumpProfile& m, const GridFunction& f);

/// kappa(D - mu) f. mu must lie inside the frequency box.
GridFunction band_project(const Window& kappa, const IntVec& mu, const GridFunction& f);
/// kappa(D - mu - offset) f for a real offset.
GridFunction band_project(const Window& kappa, const IntVec& mu, std::span<const double> offset,
                          const GridFunction& f);

/// Energy fraction of fhat outside the sup-ball of the given radius.
double out_of_band_fraction(const GridFunction& f, double radius);

/// sup_xi (sum_mu |phi(xi - mu)|^2)^{1/2}, sampled on a grid of the unit
/// cell with `per_axis` points per axis; phi supported in the sup-ball `extent`.
double translate_square_sum_sup(const FreqFn& phi, int n, double extent, int per_axis = 512);

}  // namespace latbump

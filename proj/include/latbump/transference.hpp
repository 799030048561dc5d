// Witness constructions, factorization checks, operator norm lower bounds
// and the continuum-versus-model ratio report.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latbump/bumps.hpp"
#include "latbump/grid.hpp"
#include "latbump/lattice.hpp"
#include "latbump/norms.hpp"
#include "latbump/symbols.hpp"

namespace latbump {

enum class SpaceKind { amalgam, wiener };

std::string to_string(SpaceKind k);
SpaceKind space_from_string(const std::string& s);

/// Raised when an exponent tuple violates the necessary condition of the
/// selected space. The message names the lemma proving necessity.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// amalgam: 1/q <= 1/q1 + 1/q2, wiener: 1/p <= 1/p1 + 1/p2.
bool exponent_hypothesis_holds(const ExponentTuple& e, SpaceKind space);
/// Throws HypothesisError when exponent_hypothesis_holds is false.
void require_exponent_hypothesis(const ExponentTuple& e, SpaceKind space);

struct WitnessPair {
  SpaceKind kind = SpaceKind::amalgam;
  GridFunction f1, f2;
  /// Fourier coefficients of F_j (amalgam) or the sequences b_j (wiener).
  Sequence c1, c2;
  ThetaPair theta;
  /// inverse transforms of theta_1, theta_2 on the grid
  GridFunction theta_inv1, theta_inv2;
  /// min |g| over grid points of Q = (-1/2, 1/2]^n
  double m = 0.0;
};

/// theta pair at the condition (B) witness of Phi with the default radius.
ThetaPair default_theta_pair(const BumpProfile& phi, const GridSpec& spec);

/// fhat_j(xi) = sum_nu c_j(nu) theta_j(xi - nu), i.e. f_j = F_j * F^{-1} theta_j.
WitnessPair build_amalgam_witness(const TrigPolynomial& F1, const TrigPolynomial& F2, const ThetaPair& tp);
/// Same construction from sequences; additionally needs 2 eps <= plateau of kappa.
WitnessPair build_wiener_witness(const Sequence& b1, const Sequence& b2, const ThetaPair& tp, const Window& kappa);

struct FactorizationCheck {
  /// max |lhs - rhs| / (1 + max |rhs|)
  double residual = 0.0;
  /// min over grid points of Q of |T_{a,Phi}(f1,f2)| / |T^period_a(F1,F2)|
  double dominance_min_ratio = 0.0;
  bool dominance_ok = false;
  GridFunction lhs, rhs, periodic;
};

/// T_{a,Phi}(f1,f2) against T^period_a(F1,F2) * g. Throws if condition (B)
/// fails for Phi or the witness is of the wrong kind.
FactorizationCheck verify_amalgam_factorization(const LatticeCoefficients& a, const BumpProfile& phi,
                                                const WitnessPair& w);

struct WienerFactorizationCheck {
  /// full identity against sum a b1 b2 e^{2 pi i x.(mu1+mu2)} g
  double residual = 0.0;
  /// worst per-band residual of kappa(D - xi0_1 - xi0_2 - mu) T = S(mu) e^{2 pi i x.mu} g
  double band_residual = 0.0;
  /// max_mu |recovered(mu) - S(mu)| / max_mu |S(mu)|
  double coefficient_error = 0.0;
  Sequence expected, recovered;
};

WienerFactorizationCheck verify_wiener_factorization(const LatticeCoefficients& a, const BumpProfile& phi,
                                                     const WitnessPair& w, const Window& kappa);

struct SearchParams {
  int starts = 32;
  int steps = 200;
  double shrink = 0.7;
  std::uint64_t seed = 42;
  int support_margin = 2;
  int mode_margin = 1;
  int threads = 0;
  int torus_points = 256;
  int random_pool = 16;
};

struct SearchTrace {
  std::uint64_t seed = 0;
  int starts = 0;
  int steps = 0;
  int winning_start = -1;
  long evaluations = 0;
  /// best value of each start
  std::vector<double> start_best;
  /// best-so-far after every sweep of the winning start
  std::vector<double> history;
};

struct NormEstimate {
  double value = 0.0;
  /// "ascent", "witness" or "random"
  std::string pool;
  /// coefficient witnesses (b_j, or Fourier coefficients of F_j)
  Sequence w1, w2;
  /// function witnesses for the continuum operator
  std::optional<std::pair<GridFunction, GridFunction>> functions;
  SearchTrace trace;
};

/// ||S_a(b1,b2)||_q / (||b1||_q1 ||b2||_q2).
double ratio_S(const LatticeCoefficients& a, const Sequence& b1, const Sequence& b2, double q1, double q2, double q);

/// L^p(T^n) norm of a trigonometric polynomial sampled on points^n nodes.
double torus_norm(const TrigPolynomial& F, double p, int points = 256);

/// ||T^period_a(F1,F2)||_p / (||F1||_p1 ||F2||_p2) on the torus grid.
double ratio_T_period(const LatticeCoefficients& a, const TrigPolynomial& F1, const TrigPolynomial& F2, double p1,
                      double p2, double p, int points = 256);

/// Norm of a grid function in the input/output space: amalgam (L^p, l^q) or W^{p,q}
/// with kappa translated by `offset`.
double space_norm(const GridFunction& f, double p, double q, SpaceKind space, const Window& kappa,
                  std::span<const double> offset = {});

/// ||T_sigma(f1,f2)||_Y / (||f1||_X1 ||f2||_X2); for wiener the input windows
/// are translated to xi0_j and the output window to xi0_1 + xi0_2.
double ratio_T_sigma(const SymbolGrid& sigma, const GridFunction& f1, const GridFunction& f2, const ExponentTuple& e,
                     SpaceKind space, const Window& kappa, std::span<const double> witness = {});

NormEstimate estimate_norm_S(const LatticeCoefficients& a, double q1, double q2, double q,
                             const SearchParams& params = {});
NormEstimate estimate_norm_T_period(const LatticeCoefficients& a, double p1, double p2, double p,
                                    const SearchParams& params = {});

struct ContinuumSetup {
  GridSpec spec;
  Window kappa;
  ThetaPair theta;
};

/// Grid, window (outer 0.6 by default) and theta pair for a Phi fixture.
ContinuumSetup make_continuum_setup(const BumpProfile& phi, const GridSpec& spec, double window_outer = 0.6);

/// Lower bound for T_{a,Phi}: pool (i) proof witnesses built from the model
/// maximizer (T^period for amalgam, S_a for wiener), pool (ii) random
/// band-limited pairs. `model` may carry a precomputed model estimate.
NormEstimate estimate_norm_T_aPhi(const LatticeCoefficients& a, const BumpProfile& phi, const ExponentTuple& e,
                                  SpaceKind space, const ContinuumSetup& setup, const SearchParams& params = {},
                                  const NormEstimate* model = nullptr);

/// Model estimate matching the space: T^period with (p1,p2,p) or S_a with (q1,q2,q).
NormEstimate estimate_model_norm(const LatticeCoefficients& a, const ExponentTuple& e, SpaceKind space,
                                 const SearchParams& params = {});

struct TransferRow {
  int index = 0;
  NormEstimate continuum, model;
  double ratio = 0.0;
};

struct TransferReport {
  SpaceKind space = SpaceKind::amalgam;
  ExponentTuple exponents;
  double stability_bound = 10.0;
  std::vector<TransferRow> rows;
  double min_ratio = 0.0, max_ratio = 0.0, spread = 0.0;
  bool ratios_finite = false;
  bool stable = false;
};

TransferReport transference_report(const std::vector<LatticeCoefficients>& family, const BumpProfile& phi,
                                   const ExponentTuple& e, SpaceKind space, const ContinuumSetup& setup,
                                   const SearchParams& params = {}, double stability_bound = 10.0);

/// Random a with exactly `support` entries drawn from the box |mu_j|_inf <= radius.
LatticeCoefficients random_coefficients(int n, int support, int radius, std::uint64_t seed);

}  // namespace latbump

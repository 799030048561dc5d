// Quasi-norms for exponents in (0, inf]: L^p on the grid, l^q on sequences,
// amalgam (L^p, l^q) and Wiener amalgam W^{p,q}.
#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latbump/bumps.hpp"
#include "latbump/grid.hpp"
#include "latbump/lattice.hpp"

namespace latbump {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rejects exponents outside (0, inf].
double check_exponent(double p, const char* name = "exponent");
/// Parses "2", "0.5", "1/2", "inf".
double parse_exponent(const std::string& s);
std::string format_exponent(double p);

struct ExponentTuple {
  double p1 = 2, p2 = 2, p = 2, q1 = 2, q2 = 2, q = 2;
};

/// (weight sum |v|^p)^{1/p}, max |v| for p = inf. Rescaled by max |v| so
/// small p cannot overflow.
double weighted_power_norm(std::span<const double> v, double p, double weight = 1.0);

double lq_seq_norm(std::span<const double> v, double q);
double lq_seq_norm(const Sequence& b, double q);

/// Half-open real box (lo, hi] per axis.
struct Region {
  std::array<double, 2> lo{}, hi{};
};

/// (h^n sum |f|^p)^{1/p} over the whole grid.
double lp_norm(const GridFunction& f, double p);
/// Same over grid points in the region; region edges must be multiples of h.
double lp_norm(const GridFunction& f, double p, const Region& region);

/// Integer cube index k with x in k + (-1/2, 1/2]^n for a space storage index;
/// the torus has exactly L cubes per axis (k = -L/2 folds onto L/2).
int cube_index(const GridSpec& g, int storage_index);

/// Cube norms ||f||_{L^p(k+Q)} for every cube of the torus, keyed by k.
std::vector<std::pair<IntVec, double>> cube_norms(const GridFunction& f, double p);

/// || ||1_Q(x - k) f||_{L^p_x} ||_{l^q_k}.
double amalgam_norm(const GridFunction& f, double p, double q);

struct AmalgamReport {
  double value = 0.0;
  double tail = 0.0;  // boundary_mass_fraction(f, 1)
  bool tail_ok = true;
};

/// amalgam_norm plus a check that f has decayed before the box edge.
AmalgamReport amalgam_report(const GridFunction& f, double p, double q, double tail_budget = 1e-8);

/// Energy fraction of f in the outer layer of width `width` of the box.
double boundary_mass_fraction(const GridFunction& f, double width = 1.0);

/// || || kappa(D - offset - k) f ||_{l^q_k} ||_{L^p_x} over all bands k
/// whose window meets the frequency box. Throws if fhat carries relative
/// energy above 1e-20 within the window radius of the frequency box edge.
/// Values of |fhat| at or below 1e-13 max|fhat| are treated as zero.
double wiener_norm(const GridFunction& f, double p, double q, const Window& kappa,
                   std::span<const double> offset = {});

/// Per-band pieces kappa(D - offset - k) f, keyed by k.
std::vector<std::pair<IntVec, GridFunction>> wiener_bands(const GridFunction& f, const Window& kappa,
                                                          std::span<const double> offset = {});

/// lhs = || ||F(x, y)||_{l^p_x} ||_{l^q_y}, rhs = || ||F(x, y)||_{l^q_y} ||_{l^p_x};
/// F indexed F[x][y]. Requires p <= q.
std::pair<double, double> mixed_norm_check(const std::vector<std::vector<double>>& F, double p, double q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;          // 1 - SS_res / SS_tot (nan when SS_tot = 0)
  double r2_floored = 0.0;  // 1 - SS_res / max(SS_tot, 1e-4 * count)
};

/// Least squares y = slope x + intercept. Needs >= 3 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Regression slope of log(||f_lambda||_{L^s} / ||f_lambda||_{L^r}) against
/// log(lambda), f_lambda(x) = f(lambda x) for positive integer lambda.
LineFit bernstein_scaling_check(const GridFunction& f, double r, double s, std::span<const int> dilations);

}  // namespace latbump

// Modulated dilation families f_eps(x) = e^{2 pi i xi0.x} phi(eps x) and the
// growth exponents of their amalgam and Wiener amalgam norms.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latbump/bumps.hpp"
#include "latbump/grid.hpp"
#include "latbump/norms.hpp"
#include "latbump/operators.hpp"
#include "latbump/transference.hpp"

namespace latbump {

struct ScalingPolicy {
  /// L(eps) = box_factor / eps, rounded up to an even integer
  double box_factor = 64.0;
  int rate = 8;
  /// per-axis radius of the tensor bump phihat
  double base_radius = 0.25;
  /// energy share of f_eps in the outer unit layer of the box
  double tail_budget = 1e-6;
  int threads = 0;

  /// n = 1: the defaults; n = 2: box_factor 24, base_radius 0.5 to stay within memory.
  static ScalingPolicy for_dimension(int n);
};

struct ScalingMember {
  double eps = 0.0;
  GridSpec spec;
  /// exact samples of fhat_eps(xi) = eps^{-n} phihat((xi - xi0) / eps)
  GridFunction fhat;
  GridFunction f;
  double tail = 0.0;
};

struct ScalingFamily {
  int n = 1;
  BumpProfile base;  // phihat, amplitude already rescaled
  std::vector<double> xi0;
  std::vector<double> epsilons;
  double min_Q = 0.0;  // min over the Q probe grid of |phi| after rescaling
  double amplitude_scale = 1.0;
  ScalingPolicy policy;
  std::vector<ScalingMember> members;
  bool tails_ok = true;
};

/// phi(x) = F^{-1} phihat (x) for the tensor bump phihat, by per-axis quadrature.
cplx scaling_profile(const BumpProfile& phihat, std::span<const double> x);

/// Default ladder {1/2, 1/4, 1/8}. xi0 must lie on the integer lattice.
ScalingFamily make_scaling_family(int n, const std::vector<double>& xi0,
                                  const std::vector<double>& epsilons = {0.5, 0.25, 0.125},
                                  const ScalingPolicy& policy = ScalingPolicy::for_dimension(1));

struct ScalingFit {
  std::vector<double> eps, norms;
  LineFit fit;
  /// expected slope (n/q, n/p) where the experiment has one
  double expected = 0.0;
  /// wiener only: max relative gap between ||f||_{W^{p,q}} and ||f||_{L^p}
  double single_band_gap = 0.0;
};

/// Regression of log ||f_eps||_{(L^p, l^q)} against log(1/eps); expected n/q.
ScalingFit amalgam_scaling_slope(const ScalingFamily& fam, double p, double q);

/// Regression of log ||f_eps||_{W^{p,q}} against log(1/eps); expected n/p.
/// Throws if eps * radius exceeds the window plateau (more than one band active).
ScalingFit wiener_scaling_slope(const ScalingFamily& fam, double p, double q, const Window& kappa);

struct BilinearScaling {
  ScalingFit out;
  bool degenerate = false;
  cplx sigma0 = 0.0;
  /// min over x with eps x in Q of |T_sigma(f_eps, g_eps)(x)| at the smallest eps
  double min_on_scaled_Q = 0.0;
  bool half_bound_holds = false;
};

/// ||T_sigma(f_eps, g_eps)|| in the chosen space, per eps; both families must
/// share the eps ladder and policy.
BilinearScaling bilinear_product_scaling(const ScalingFamily& f, const ScalingFamily& g, const FreqFn& sigma,
                                         SpaceKind space, double p, double q, const Window& kappa);

struct NecessityVerdict {
  bool violated = false;
  /// out slope - (in1 + in2)
  double gap = 0.0;
  double in1 = 0.0, in2 = 0.0, out = 0.0;
  std::string text;
};

/// Violated iff out - (in1 + in2) > margin.
NecessityVerdict necessity_verdict(double in1, double in2, double out, double margin = 0.1);

struct NecessityExperiment {
  SpaceKind space = SpaceKind::amalgam;
  ExponentTuple exponents;
  ScalingFit in1, in2;
  BilinearScaling out;
  NecessityVerdict verdict;
  bool hypothesis_holds = true;
};

/// Measures the input and output slopes for the tuple with sigma = 1 and
/// families at xi0 = 1 and eta0 = -2 (per axis).
NecessityExperiment run_necessity(int n, const ExponentTuple& e, SpaceKind space,
                                  const std::vector<double>& epsilons = {0.5, 0.25, 0.125},
                                  double window_outer = 0.6);

}  // namespace latbump

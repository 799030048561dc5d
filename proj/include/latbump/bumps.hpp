// Smooth compactly supported profiles with analytically known supports.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "latbump/grid.hpp"
#include "latbump/lattice.hpp"

namespace latbump {

enum class BumpKind { radial_exp, tensor_exp, plateau };

std::string to_string(BumpKind k);
BumpKind bump_kind_from_string(const std::string& s);

/// Profile in R^d. The support is contained in the closed sup-norm box
/// center +- radius. The exp kinds use exp(-1/(1 - t^2)), in the Euclidean
/// radius of the rescaled variable (radial) or per axis (tensor). The
/// plateau kind equals `amplitude` on the box center +- inner and decays to
/// zero through exp(-1/t) transitions.
struct BumpProfile {
  BumpKind kind = BumpKind::tensor_exp;
  std::vector<double> center;
  std::vector<double> radius;
  std::vector<double> inner;  // plateau only
  cplx amplitude{1.0, 0.0};

  int dim() const { return static_cast<int>(center.size()); }
  /// Largest |center_i| + radius_i, the sup-norm extent of the support.
  double extent() const;
  bool operator==(const BumpProfile&) const = default;
};

BumpProfile make_bump(BumpKind kind, std::vector<double> center, std::vector<double> radius,
                      cplx amplitude = 1.0);

cplx bump_eval(const BumpProfile& b, std::span<const double> x);

/// exp(-1/(1 - t^2)) on |t| < 1, else 0.
double standard_bump(double t);

/// C^infinity profile equal to 1 on the sup-ball of radius `inner` and
/// supported in the closed sup-ball of radius `outer`, centered at 0.
BumpProfile make_plateau(int d, double inner, double outer);

/// Partition-of-unity window kappa(xi) = base(xi) / sum_k base(xi - k) built
/// from a tensor exp bump of sup-radius `outer`.
struct Window {
  BumpProfile base;
  bool normalized = true;

  int dim() const { return base.dim(); }
  double outer() const { return base.radius.at(0); }
  /// Radius of the sup-ball on which kappa == 1 and all other translates vanish.
  double plateau() const { return 1.0 - outer(); }
  double eval(std::span<const double> xi) const;
  /// kappa(xi - shift).
  double eval_shifted(std::span<const double> xi, std::span<const double> shift) const;
};

/// outer must lie in (1/2, 1).
Window make_window(int d, double outer);

struct ConditionBResult {
  bool holds = false;
  /// Point with Phi != 0 outside every nonzero integer translate of supp Phi.
  std::vector<double> witness;
  /// Sup-norm distance from the witness to the nonzero set of the nearest
  /// nonzero translate.
  double slack = 0.0;
  std::string certificate;
};

/// Decides condition (B) from the symbolic support box. Radial profiles are
/// rejected because their support is not a box.
ConditionBResult check_condition_B(const BumpProfile& phi);

/// Default theta radius: a quarter of the slack.
double default_theta_radius(const ConditionBResult& cb);

/// theta_1, theta_2 and the function
///   g(x) = iint e^{2 pi i x.(xi1 + xi2)} Phi(xi1, xi2) theta1(xi1) theta2(xi2)
/// on the torus of `spec`, with theta_1 rescaled so min_{x in Q} |g| >= 1.
struct ThetaPair {
  BumpProfile theta1, theta2;
  std::vector<double> witness;  // xi^0 = (xi^0_1, xi^0_2), length 2n
  double radius = 0.0;          // epsilon actually used
  int halvings = 0;
  GridFunction g;               // space side
  /// Nonzero spectrum of g: frequency storage indices and values G(zeta),
  /// with g(x) = (1/L)^n sum G(zeta) e^{2 pi i x.zeta}.
  std::vector<std::pair<IntVec, cplx>> spectrum;
  double min_modulus = 0.0;     // min over the Q probe grid after rescaling
  double scale = 1.0;           // factor applied to theta1

  cplx eval_g(std::span<const double> x) const;
};

/// Q probe grid of `per_axis` points per axis covering (-1/2, 1/2]^n.
std::vector<std::array<double, 2>> q_probe_grid(int n, int per_axis);

ThetaPair make_theta_pair(const BumpProfile& phi, std::span<const double> witness, double radius,
                          const GridSpec& spec);

}  // namespace latbump

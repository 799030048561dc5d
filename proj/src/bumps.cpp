#include "latbump/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace latbump {
namespace {

// exp(-1/t) for t > 0.
double transition(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// 1 for u <= 0, 0 for u >= 1, smooth in between.
double smooth_step(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double a = transition(1.0 - u), b = transition(u);
  return a / (a + b);
}

void check_shape(const BumpProfile& b) {
  const auto d = b.center.size();
  if (d == 0) throw std::invalid_argument("bump: empty center");
  if (b.radius.size() != d) throw std::invalid_argument("bump: radius has wrong dimension");
  for (double r : b.radius)
    if (!(r > 0.0)) throw std::invalid_argument("bump: radius must be positive");
  if (b.kind == BumpKind::plateau) {
    if (b.inner.size() != d) throw std::invalid_argument("bump: plateau needs an inner radius per axis");
    for (std::size_t i = 0; i < d; ++i)
      if (!(b.inner[i] > 0.0) || b.inner[i] >= b.radius[i])
        throw std::invalid_argument("bump: plateau needs 0 < inner < outer");
  }
}

// Sup-norm distance from p to the closed support box of phi translated by mu.
double box_distance(const BumpProfile& phi, std::span<const double> p, std::span<const int> mu) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max(d, std::abs(p[i] - phi.center[i] - mu[i]) - phi.radius[i]);
  return std::max(d, 0.0);
}

// Smallest distance from p to a nonzero translate, over |mu|_inf <= 3.
double translate_slack(const BumpProfile& phi, std::span<const double> p) {
  const int d = phi.dim();
  std::vector<int> mu(d, -3);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    if (std::any_of(mu.begin(), mu.end(), [](int m) { return m != 0; }))
      best = std::min(best, box_distance(phi, p, mu));
    int i = 0;
    while (i < d && mu[i] == 3) mu[i++] = -3;
    if (i == d) break;
    ++mu[i];
  }
  return best;
}

}  // namespace

std::string to_string(BumpKind k) {
  switch (k) {
    case BumpKind::radial_exp: return "radial-exp";
    case BumpKind::tensor_exp: return "tensor-exp";
    case BumpKind::plateau: return "plateau";
  }
  return "?";
}

BumpKind bump_kind_from_string(const std::string& s) {
  if (s == "radial-exp") return BumpKind::radial_exp;
  if (s == "tensor-exp") return BumpKind::tensor_exp;
  if (s == "plateau") return BumpKind::plateau;
  throw std::invalid_argument("unknown bump kind '" + s + "'");
}

double BumpProfile::extent() const {
  double e = 0.0;
  for (int i = 0; i < dim(); ++i) e = std::max(e, std::abs(center[i]) + radius[i]);
  return e;
}

BumpProfile make_bump(BumpKind kind, std::vector<double> center, std::vector<double> radius,
                      cplx amplitude) {
  if (kind == BumpKind::plateau) throw std::invalid_argument("make_bump: use make_plateau for plateau profiles");
  if (radius.size() == 1 && center.size() > 1) radius.assign(center.size(), radius[0]);
  BumpProfile b{kind, std::move(center), std::move(radius), {}, amplitude};
  check_shape(b);
  return b;
}

double standard_bump(double t) {
  const double u = 1.0 - t * t;
  return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

cplx bump_eval(const BumpProfile& b, std::span<const double> x) {
  const int d = b.dim();
  for (int i = 0; i < d; ++i)
    if (std::abs(x[i] - b.center[i]) >= b.radius[i]) return 0.0;

  switch (b.kind) {
    case BumpKind::tensor_exp: {
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= standard_bump((x[i] - b.center[i]) / b.radius[i]);
      return b.amplitude * v;
    }
    case BumpKind::radial_exp: {
      double t2 = 0.0;
      for (int i = 0; i < d; ++i) {
        const double t = (x[i] - b.center[i]) / b.radius[i];
        t2 += t * t;
      }
      if (t2 >= 1.0) return 0.0;
      return b.amplitude * std::exp(-1.0 / (1.0 - t2));
    }
    case BumpKind::plateau: {
      double v = 1.0;
      for (int i = 0; i < d; ++i) {
        const double u = (std::abs(x[i] - b.center[i]) - b.inner[i]) / (b.radius[i] - b.inner[i]);
        v *= smooth_step(u);
      }
      return b.amplitude * v;
    }
  }
  return 0.0;
}

BumpProfile make_plateau(int d, double inner, double outer) {
  if (d <= 0) throw std::invalid_argument("make_plateau: dimension must be positive");
  if (!(inner > 0.0) || inner >= outer)
    throw std::invalid_argument("make_plateau: need 0 < inner < outer");
  return {BumpKind::plateau, std::vector<double>(d, 0.0), std::vector<double>(d, outer),
          std::vector<double>(d, inner), 1.0};
}

Window make_window(int d, double outer) {
  if (!(outer > 0.5 && outer < 1.0))
    throw std::invalid_argument("make_window: outer radius must lie in (1/2, 1)");
  return {make_bump(BumpKind::tensor_exp, std::vector<double>(d, 0.0), std::vector<double>(d, outer)),
          true};
}

double Window::eval(std::span<const double> xi) const {
  // The base is a tensor product, so the translate sum factorizes per axis.
  const double r = outer();
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    const double x = xi[i];
    const double own = standard_bump(x / r);
    if (own == 0.0) return 0.0;
    if (!normalized) {
      v *= own;
      continue;
    }
    const double k0 = std::floor(x);
    double total = 0.0;
    for (double k = k0 - 1; k <= k0 + 2; k += 1.0) total += standard_bump((x - k) / r);
    v *= own / total;
  }
  return v;
}

double Window::eval_shifted(std::span<const double> xi, std::span<const double> shift) const {
  std::array<double, 2> y{};
  for (int i = 0; i < dim(); ++i) y[i] = xi[i] - shift[i];
  return eval(std::span<const double>(y.data(), dim()));
}

ConditionBResult check_condition_B(const BumpProfile& phi) {
  check_shape(phi);
  if (phi.kind == BumpKind::radial_exp)
    throw std::invalid_argument("check_condition_B: radial support is not a box; use a tensor or plateau profile");

  ConditionBResult out;
  std::ostringstream cert;
  // The support box center+-r misses every nonzero translate at its center
  // exactly when each r_i < 1; if some r_i >= 1 the translates by +-e_i
  // cover the whole support along that axis.
  for (int i = 0; i < phi.dim(); ++i) {
    if (phi.radius[i] >= 1.0) {
      cert << "axis " << i << ": radius " << phi.radius[i]
           << " >= 1, so the translates by +e_" << i << " and -e_" << i << " cover the support";
      out.certificate = cert.str();
      return out;
    }
  }
  out.holds = true;
  out.witness = phi.center;
  out.slack = translate_slack(phi, out.witness);
  cert << "all radii < 1; center misses nonzero translates with sup-distance " << out.slack;
  out.certificate = cert.str();
  return out;
}

double default_theta_radius(const ConditionBResult& cb) {
  if (!cb.holds) throw std::invalid_argument("default_theta_radius: condition (B) fails");
  return cb.slack / 4.0;
}

cplx ThetaPair::eval_g(std::span<const double> x) const {
  const GridSpec& sp = g.spec;
  const double w = std::pow(sp.freq_step(), sp.dim());
  cplx sum{};
  for (const auto& [idx, val] : spectrum) {
    double phase = 0.0;
    for (int d = 0; d < sp.dim(); ++d) phase += x[d] * sp.freq_coord(idx[d]);
    phase -= std::floor(phase);
    sum += val * std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return w * sum;
}

std::vector<std::array<double, 2>> q_probe_grid(int n, int per_axis) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < per_axis; ++i) {
    const double xi = -0.5 + static_cast<double>(i + 1) / per_axis;
    if (n == 1) {
      pts.push_back({xi, 0.0});
      continue;
    }
    for (int j = 0; j < per_axis; ++j) pts.push_back({xi, -0.5 + static_cast<double>(j + 1) / per_axis});
  }
  return pts;
}

namespace {

// Builds theta_1, theta_2 and the spectrum of g at a fixed epsilon. Returns
// min_Q |g| before any rescaling.
double assemble_theta(const BumpProfile& phi, std::span<const double> w, double eps,
                      const GridSpec& spec, ThetaPair& tp) {
  const int n = spec.dim();
  tp.theta1 = make_bump(BumpKind::radial_exp, {w.begin(), w.begin() + n}, std::vector<double>(n, eps));
  tp.theta2 = make_bump(BumpKind::radial_exp, {w.begin() + n, w.end()}, std::vector<double>(n, eps));
  tp.radius = eps;

  // Frequency grid points inside each theta support, as centered indices.
  auto support_points = [&](const BumpProfile& th) {
    std::vector<std::pair<IntVec, double>> pts;
    const int L = spec.box();
    IntVec lo{}, hi{};
    for (int d = 0; d < n; ++d) {
      lo[d] = static_cast<int>(std::floor((th.center[d] - eps) * L));
      hi[d] = static_cast<int>(std::ceil((th.center[d] + eps) * L));
    }
    for (const auto& k : lattice_box(n, lo, hi)) {
      std::array<double, 2> xi{};
      for (int d = 0; d < n; ++d) {
        if (!spec.in_range(k[d])) throw std::invalid_argument("make_theta_pair: theta leaves the frequency box");
        xi[d] = static_cast<double>(k[d]) / L;
      }
      const double v = bump_eval(th, std::span<const double>(xi.data(), n)).real();
      if (v != 0.0) pts.push_back({k, v});
    }
    return pts;
  };
  const auto p1 = support_points(tp.theta1);
  const auto p2 = support_points(tp.theta2);

  std::map<IntVec, cplx> G;
  const double w_n = std::pow(spec.freq_step(), n);
  for (const auto& [k1, v1] : p1) {
    for (const auto& [k2, v2] : p2) {
      std::array<double, 4> xi{};
      for (int d = 0; d < n; ++d) {
        xi[d] = static_cast<double>(k1[d]) / spec.box();
        xi[n + d] = static_cast<double>(k2[d]) / spec.box();
      }
      const cplx ph = bump_eval(phi, std::span<const double>(xi.data(), 2 * n));
      if (ph == 0.0) continue;
      const IntVec z = k1 + k2;
      for (int d = 0; d < n; ++d)
        if (!spec.in_range(z[d])) throw std::invalid_argument("make_theta_pair: xi1 + xi2 leaves the frequency box");
      G[z] += w_n * ph * v1 * v2;
    }
  }

  tp.spectrum.clear();
  GridFunction Gf = GridFunction::zeros(spec, Side::frequency);
  for (const auto& [z, v] : G) {
    const IntVec idx{spec.wrap(z[0]), n == 2 ? spec.wrap(z[1]) : 0};
    tp.spectrum.push_back({idx, v});
    Gf[spec.flat(idx)] = v;
  }
  tp.g = idft(Gf);

  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : q_probe_grid(n, 64))
    m = std::min(m, std::abs(tp.eval_g(std::span<const double>(x.data(), n))));
  return tp.spectrum.empty() ? 0.0 : m;
}

}  // namespace

ThetaPair make_theta_pair(const BumpProfile& phi, std::span<const double> witness, double radius,
                          const GridSpec& spec) {
  const int n = spec.dim();
  if (phi.dim() != 2 * n) throw std::invalid_argument("make_theta_pair: Phi must live on R^n x R^n");
  if (witness.size() != static_cast<std::size_t>(2 * n))
    throw std::invalid_argument("make_theta_pair: witness must have 2n components");
  if (!(radius > 0.0)) throw std::invalid_argument("make_theta_pair: theta radius must be positive");
  if (bump_eval(phi, witness) == 0.0) throw std::invalid_argument("make_theta_pair: Phi vanishes at the witness");
  const double slack = translate_slack(phi, witness);
  if (slack < 2.0 * radius)
    throw std::invalid_argument("make_theta_pair: the 2*eps ball around the witness meets a translated support");

  ThetaPair tp;
  tp.witness.assign(witness.begin(), witness.end());
  double eps = radius;
  for (int h = 0; h <= 4; ++h) {
    const double m = assemble_theta(phi, witness, eps, spec, tp);
    tp.halvings = h;
    if (m > 0.0 && std::isfinite(m)) {
      tp.scale = (1.0 + 1e-6) / m;
      tp.theta1.amplitude *= tp.scale;
      for (auto& v : tp.g.samples) v *= tp.scale;
      for (auto& [idx, v] : tp.spectrum) v *= tp.scale;
      double mm = std::numeric_limits<double>::infinity();
      for (const auto& x : q_probe_grid(n, 64))
        mm = std::min(mm, std::abs(tp.eval_g(std::span<const double>(x.data(), n))));
      tp.min_modulus = mm;
      return tp;
    }
    eps /= 2.0;
  }
  throw std::runtime_error("make_theta_pair: g vanishes on Q after 4 halvings of eps");
}

}  // namespace latbump

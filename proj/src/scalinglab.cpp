#include "latbump/scalinglab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "latbump/parallel.hpp"

namespace latbump {

ScalingPolicy ScalingPolicy::for_dimension(int n) {
  ScalingPolicy p;
  if (n == 2) {
    p.box_factor = 24.0;
    p.base_radius = 0.5;
  }
  return p;
}

cplx scaling_profile(const BumpProfile& phihat, std::span<const double> x) {
  if (phihat.kind != BumpKind::tensor_exp) throw std::invalid_argument("scaling_profile: needs a tensor bump");
  // per axis: int r b((xi - c)/r) e^{2 pi i x xi} dxi, trapezoid on the support
  constexpr int kNodes = 4096;
  cplx v = phihat.amplitude;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double r = phihat.radius[d], c = phihat.center[d];
    cplx s = 0.0;
    for (int i = 1; i < kNodes; ++i) {
      const double t = -1.0 + 2.0 * i / kNodes;
      s += standard_bump(t) * std::polar(1.0, 2.0 * std::numbers::pi * x[d] * (c + r * t));
    }
    v *= s * (2.0 * r / kNodes);
  }
  return v;
}

ScalingFamily make_scaling_family(int n, const std::vector<double>& xi0, const std::vector<double>& epsilons,
                                  const ScalingPolicy& policy) {
  if (n != 1 && n != 2) throw std::invalid_argument("scaling family: n must be 1 or 2");
  if (xi0.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("scaling family: xi0 has wrong dimension");
  for (double v : xi0)
    if (v != std::round(v)) throw std::invalid_argument("scaling family: xi0 must lie on the integer lattice");
  if (epsilons.empty()) throw std::invalid_argument("scaling family: no epsilons");
  for (double e : epsilons)
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("scaling family: epsilons must lie in (0, 1]");
  if (!(policy.base_radius > 0.0 && policy.base_radius <= 1.0))
    throw std::invalid_argument("scaling family: phihat radius must lie in (0, 1]");

  ScalingFamily fam;
  fam.n = n;
  fam.xi0 = xi0;
  fam.epsilons = epsilons;
  fam.policy = policy;
  fam.base = make_bump(BumpKind::tensor_exp, std::vector<double>(n, 0.0), {policy.base_radius});

  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : q_probe_grid(n, 64)) m = std::min(m, std::abs(scaling_profile(fam.base, std::span<const double>(x.data(), n))));
  if (!(m > 0.0)) throw std::runtime_error("scaling family: phi vanishes on Q; choose a narrower phihat");
  fam.amplitude_scale = (1.0 + 1e-4) / m;
  fam.base.amplitude *= fam.amplitude_scale;
  fam.min_Q = m * fam.amplitude_scale;

  fam.members.resize(epsilons.size());
  parallel_for(
      epsilons.size(),
      [&](std::size_t i) {
        const double eps = epsilons[i];
        int L = static_cast<int>(std::ceil(policy.box_factor / eps - 1e-9));
        L += L % 2;
        ScalingMember mem;
        mem.eps = eps;
        mem.spec = make_grid(n, L, policy.rate);
        for (int d = 0; d < n; ++d)
          if (std::abs(xi0[d]) + eps * policy.base_radius >= policy.rate / 2.0)
            throw std::invalid_argument("scaling family: fhat_eps does not fit the frequency box");
        const double w = std::pow(eps, -n);
        mem.fhat = GridFunction::sample(mem.spec, Side::frequency, [&](std::span<const double> xi) {
          std::array<double, 2> y{};
          for (int d = 0; d < n; ++d) y[d] = (xi[d] - xi0[d]) / eps;
          return w * bump_eval(fam.base, std::span<const double>(y.data(), n));
        });
        mem.f = idft(mem.fhat);
        mem.tail = boundary_mass_fraction(mem.f, 1.0);
        fam.members[i] = std::move(mem);
      },
      policy.threads);
  for (const auto& mem : fam.members) fam.tails_ok = fam.tails_ok && mem.tail <= policy.tail_budget;
  return fam;
}

namespace {

ScalingFit fit_norms(const std::vector<double>& eps, const std::vector<double>& norms, double expected) {
  ScalingFit out;
  out.eps = eps;
  out.norms = norms;
  out.expected = expected;
  if (eps.size() < 3) throw std::invalid_argument("scaling fit: regression needs at least 3 epsilons");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) throw std::invalid_argument("scaling fit: degenerate norm");
    lx.push_back(std::log(1.0 / eps[i]));
    ly.push_back(std::log(norms[i]));
  }
  out.fit = fit_line(lx, ly);
  return out;
}

}  // namespace

ScalingFit amalgam_scaling_slope(const ScalingFamily& fam, double p, double q) {
  if (fam.members.size() < 3) throw std::invalid_argument("amalgam_scaling_slope: needs at least 3 epsilons");
  std::vector<double> norms(fam.members.size());
  parallel_for(
      norms.size(), [&](std::size_t i) { norms[i] = amalgam_norm(fam.members[i].f, p, q); }, fam.policy.threads);
  return fit_norms(fam.epsilons, norms, std::isinf(q) ? 0.0 : fam.n / q);
}

ScalingFit wiener_scaling_slope(const ScalingFamily& fam, double p, double q, const Window& kappa) {
  if (fam.members.size() < 3) throw std::invalid_argument("wiener_scaling_slope: needs at least 3 epsilons");
  const double rad = *std::max_element(fam.base.radius.begin(), fam.base.radius.end());
  for (double e : fam.epsilons)
    if (e * rad > kappa.plateau())
      throw std::invalid_argument("wiener_scaling_slope: eps too large for the window, several bands are active");
  std::vector<double> norms(fam.members.size()), gaps(fam.members.size());
  parallel_for(
      norms.size(),
      [&](std::size_t i) {
        norms[i] = wiener_norm(fam.members[i].f, p, q, kappa);
        const double lp = lp_norm(fam.members[i].f, p);
        gaps[i] = std::abs(norms[i] - lp) / lp;
      },
      fam.policy.threads);
  auto out = fit_norms(fam.epsilons, norms, std::isinf(p) ? 0.0 : fam.n / p);
  out.single_band_gap = *std::max_element(gaps.begin(), gaps.end());
  return out;
}

BilinearScaling bilinear_product_scaling(const ScalingFamily& f, const ScalingFamily& g, const FreqFn& sigma,
                                         SpaceKind space, double p, double q, const Window& kappa) {
  if (f.epsilons != g.epsilons || f.members.size() != g.members.size())
    throw std::invalid_argument("bilinear_product_scaling: families need the same eps ladder");
  const int n = f.n;
  BilinearScaling out;
  std::array<double, 4> z{};
  for (int d = 0; d < n; ++d) {
    z[d] = f.xi0[d];
    z[n + d] = g.xi0[d];
  }
  out.sigma0 = sigma(std::span<const double>(z.data(), 2 * n));
  const auto& coarse = f.members.front().spec;
  for (int d = 0; d < 2 * n; ++d)
    if (std::abs(z[d] * coarse.box() - std::round(z[d] * coarse.box())) > 1e-9)
      throw std::invalid_argument("bilinear_product_scaling: (xi0, eta0) is not on the frequency grid");

  const std::size_t M = f.members.size();
  std::vector<GridFunction> T(M);
  std::vector<double> norms(M);
  parallel_for(
      M,
      [&](std::size_t i) {
        if (!(f.members[i].spec == g.members[i].spec))
          throw std::invalid_argument("bilinear_product_scaling: member grids differ");
        T[i] = apply_T_symbol(sigma, f.members[i].fhat, g.members[i].fhat);
        norms[i] = space == SpaceKind::amalgam ? amalgam_norm(T[i], p, q) : wiener_norm(T[i], p, q, kappa);
      },
      f.policy.threads);

  const double peak = *std::max_element(norms.begin(), norms.end());
  out.out.eps = f.epsilons;
  out.out.norms = norms;
  out.out.expected = space == SpaceKind::amalgam ? (std::isinf(q) ? 0.0 : n / q) : (std::isinf(p) ? 0.0 : n / p);
  if (std::abs(out.sigma0) < 1e-12 || !(peak > 1e-12)) {
    out.degenerate = true;
  } else {
    out.out = fit_norms(f.epsilons, norms, out.out.expected);
  }

  std::size_t smallest = 0;
  for (std::size_t i = 1; i < M; ++i)
    if (f.epsilons[i] < f.epsilons[smallest]) smallest = i;
  const auto& Ts = T[smallest];
  const double eps = f.epsilons[smallest];
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Ts.samples.size(); ++i) {
    const auto x = Ts.coord(i);
    bool in = true;
    for (int d = 0; d < n; ++d) in = in && eps * x[d] > -0.5 && eps * x[d] <= 0.5;
    if (in) m = std::min(m, std::abs(Ts[i]));
  }
  out.min_on_scaled_Q = m;
  out.half_bound_holds = !out.degenerate && m >= 0.5 * std::abs(out.sigma0);
  return out;
}

NecessityVerdict necessity_verdict(double in1, double in2, double out, double margin) {
  for (double v : {in1, in2, out})
    if (!std::isfinite(v)) throw std::invalid_argument("necessity_verdict: missing slope data");
  NecessityVerdict v;
  v.in1 = in1;
  v.in2 = in2;
  v.out = out;
  v.gap = out - (in1 + in2);
  v.violated = v.gap > margin;
  std::ostringstream os;
  os << (v.violated ? "violated" : "consistent") << ": output slope " << out << " vs input sum " << in1 + in2
     << " (gap " << v.gap << ", margin " << margin << ")";
  v.text = os.str();
  return v;
}

NecessityExperiment run_necessity(int n, const ExponentTuple& e, SpaceKind space, const std::vector<double>& epsilons,
                                  double window_outer) {
  NecessityExperiment ex;
  ex.space = space;
  ex.exponents = e;
  ex.hypothesis_holds = exponent_hypothesis_holds(e, space);
  const auto policy = ScalingPolicy::for_dimension(n);
  const auto f = make_scaling_family(n, std::vector<double>(n, 1.0), epsilons, policy);
  const auto g = make_scaling_family(n, std::vector<double>(n, -2.0), epsilons, policy);
  const auto kappa = make_window(n, window_outer);
  const FreqFn one = [](std::span<const double>) { return cplx(1.0); };
  if (space == SpaceKind::amalgam) {
    ex.in1 = amalgam_scaling_slope(f, e.p1, e.q1);
    ex.in2 = amalgam_scaling_slope(g, e.p2, e.q2);
  } else {
    ex.in1 = wiener_scaling_slope(f, e.p1, e.q1, kappa);
    ex.in2 = wiener_scaling_slope(g, e.p2, e.q2, kappa);
  }
  ex.out = bilinear_product_scaling(f, g, one, space, e.p, e.q, kappa);
  ex.verdict = necessity_verdict(ex.in1.fit.slope, ex.in2.fit.slope, ex.out.out.fit.slope);
  return ex;
}

}  // namespace latbump

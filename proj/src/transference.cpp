#include "latbump/transference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "latbump/operators.hpp"
#include "latbump/parallel.hpp"

namespace latbump {

std::string to_string(SpaceKind k) { return k == SpaceKind::amalgam ? "amalgam" : "wiener"; }

SpaceKind space_from_string(const std::string& s) {
  if (s == "amalgam") return SpaceKind::amalgam;
  if (s == "wiener") return SpaceKind::wiener;
  throw std::invalid_argument("unknown space '" + s + "' (expected amalgam or wiener)");
}

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

bool exponent_hypothesis_holds(const ExponentTuple& e, SpaceKind space) {
  if (space == SpaceKind::amalgam) return inv(e.q) <= inv(e.q1) + inv(e.q2) + 1e-12;
  return inv(e.p) <= inv(e.p1) + inv(e.p2) + 1e-12;
}

void require_exponent_hypothesis(const ExponentTuple& e, SpaceKind space) {
  for (double v : {e.p1, e.p2, e.p, e.q1, e.q2, e.q}) check_exponent(v);
  if (exponent_hypothesis_holds(e, space)) return;
  std::ostringstream os;
  if (space == SpaceKind::amalgam) {
    os << "amalgam necessity lemma: boundedness holds only when 1/q <= 1/q1 + 1/q2; got 1/q = " << inv(e.q)
       << " > " << inv(e.q1) + inv(e.q2);
  } else {
    os << "Wiener necessity lemma: boundedness holds only when 1/p <= 1/p1 + 1/p2; got 1/p = " << inv(e.p)
       << " > " << inv(e.p1) + inv(e.p2);
  }
  throw HypothesisError(os.str());
}

ThetaPair default_theta_pair(const BumpProfile& phi, const GridSpec& spec) {
  const auto cb = check_condition_B(phi);
  if (!cb.holds) throw std::invalid_argument("condition (B) fails: " + cb.certificate);
  return make_theta_pair(phi, cb.witness, default_theta_radius(cb), spec);
}

namespace {

// idft of sum_nu c(nu) theta(xi - nu).
GridFunction modulated_sum(const Sequence& c, const BumpProfile& theta, const GridSpec& g) {
  const int n = g.dim();
  const double half = g.rate() / 2.0;
  for (const auto& [nu, v] : c.entries)
    for (int d = 0; d < n; ++d)
      if (std::abs(theta.center[d] + nu[d]) + theta.radius[d] >= half)
        throw std::invalid_argument("witness: a translated theta support leaves the frequency box");
  auto F = GridFunction::zeros(g, Side::frequency);
  for (std::size_t q = 0; q < F.samples.size(); ++q) {
    const auto x = F.coord(q);
    for (const auto& [nu, v] : c.entries) {
      if (v == 0.0) continue;
      std::array<double, 2> y{};
      for (int d = 0; d < n; ++d) y[d] = x[d] - nu[d];
      const cplx t = bump_eval(theta, std::span<const double>(y.data(), n));
      if (t != 0.0) F[q] += v * t;
    }
  }
  return idft(F);
}

double min_on_Q(const GridFunction& g) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    const auto x = g.coord(i);
    bool inQ = true;
    for (int d = 0; d < g.spec.dim(); ++d) inQ = inQ && x[d] > -0.5 && x[d] <= 0.5;
    if (inQ) m = std::min(m, std::abs(g[i]));
  }
  return m;
}

bool in_Q(const std::array<double, 2>& x, int n) {
  for (int d = 0; d < n; ++d)
    if (!(x[d] > -0.5 && x[d] <= 0.5)) return false;
  return true;
}

WitnessPair build_witness(SpaceKind kind, const Sequence& c1, const Sequence& c2, const ThetaPair& tp) {
  const GridSpec& g = tp.g.spec;
  if (tp.radius >= 0.5) throw std::invalid_argument("witness: theta radius must be < 1/2");
  if (c1.n != g.dim() || c2.n != g.dim()) throw std::invalid_argument("witness: dimension mismatch");
  WitnessPair w;
  w.kind = kind;
  w.c1 = c1;
  w.c2 = c2;
  w.theta = tp;
  w.f1 = modulated_sum(c1, tp.theta1, g);
  w.f2 = modulated_sum(c2, tp.theta2, g);
  Sequence delta{g.dim(), {{IntVec{0, 0}, 1.0}}};
  w.theta_inv1 = modulated_sum(delta, tp.theta1, g);
  w.theta_inv2 = modulated_sum(delta, tp.theta2, g);
  w.m = min_on_Q(tp.g);
  if (!(w.m >= 1.0)) throw std::runtime_error("witness: min_Q |g| < 1 on the grid");
  return w;
}

GridFunction sample_trig(const TrigPolynomial& F, const GridSpec& g) {
  return GridFunction::sample(g, Side::space, [&](std::span<const double> x) { return F.eval(x); });
}

}  // namespace

WitnessPair build_amalgam_witness(const TrigPolynomial& F1, const TrigPolynomial& F2, const ThetaPair& tp) {
  return build_witness(SpaceKind::amalgam, F1.as_sequence(), F2.as_sequence(), tp);
}

WitnessPair build_wiener_witness(const Sequence& b1, const Sequence& b2, const ThetaPair& tp, const Window& kappa) {
  if (2.0 * tp.radius > kappa.plateau())
    throw std::invalid_argument("wiener witness: 2 eps exceeds the plateau radius of the window");
  return build_witness(SpaceKind::wiener, b1, b2, tp);
}

FactorizationCheck verify_amalgam_factorization(const LatticeCoefficients& a, const BumpProfile& phi,
                                                const WitnessPair& w) {
  if (!check_condition_B(phi).holds) throw std::invalid_argument("factorization: condition (B) fails for Phi");
  const GridSpec& g = w.f1.spec;
  FactorizationCheck out;
  out.lhs = apply_T_sigma(synth_sigma(a, phi, g), w.f1, w.f2);
  const auto Tp = apply_T_period(a, TrigPolynomial::from_sequence(w.c1), TrigPolynomial::from_sequence(w.c2));
  out.periodic = sample_trig(Tp, g);
  out.rhs = out.periodic;
  for (std::size_t i = 0; i < out.rhs.samples.size(); ++i) out.rhs[i] *= w.theta.g[i];
  double diff = 0.0;
  for (std::size_t i = 0; i < out.rhs.samples.size(); ++i) diff = std::max(diff, std::abs(out.lhs[i] - out.rhs[i]));
  out.residual = diff / (1.0 + out.rhs.max_abs());

  // |T(f1,f2)| = |T^period| |g| >= |T^period| on Q; rounding allowance 1e-12 (1 + max|T^period|).
  const double pmax = out.periodic.max_abs(), slack = 1e-12 * (1.0 + pmax);
  out.dominance_ok = true;
  out.dominance_min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.lhs.samples.size(); ++i) {
    if (!in_Q(out.lhs.coord(i), g.dim())) continue;
    const double l = std::abs(out.lhs[i]), p = std::abs(out.periodic[i]);
    if (l < p - slack) out.dominance_ok = false;
    if (p > 1e-9 * pmax) out.dominance_min_ratio = std::min(out.dominance_min_ratio, l / p);
  }
  return out;
}

WienerFactorizationCheck verify_wiener_factorization(const LatticeCoefficients& a, const BumpProfile& phi,
                                                     const WitnessPair& w, const Window& kappa) {
  const auto base = verify_amalgam_factorization(a, phi, w);
  const GridSpec& g = w.f1.spec;
  const int n = g.dim();
  WienerFactorizationCheck out;
  out.residual = base.residual;
  out.expected = apply_S(a, w.c1, w.c2);

  std::array<double, 2> off{};
  for (int d = 0; d < n; ++d) off[d] = w.theta.witness[d] + w.theta.witness[n + d];
  IntVec lo{0, 0}, hi{0, 0};
  bool first = true;
  for (const auto& [m1, v1] : w.c1.entries)
    for (const auto& [m2, v2] : w.c2.entries) {
      const IntVec s = m1 + m2;
      for (int d = 0; d < n; ++d) {
        lo[d] = first ? s[d] : std::min(lo[d], s[d]);
        hi[d] = first ? s[d] : std::max(hi[d], s[d]);
      }
      first = false;
    }
  for (int d = 0; d < n; ++d) {
    --lo[d];
    ++hi[d];
  }
  const double scale = 1.0 + base.rhs.max_abs();
  double smax = 0.0;
  for (const auto& [mu, v] : out.expected.entries) smax = std::max(smax, std::abs(v));
  out.recovered.n = n;
  double band_res = 0.0, coef_err = 0.0;
  for (const auto& mu : lattice_box(n, lo, hi)) {
    const auto band = band_project(kappa, mu, std::span<const double>(off.data(), n), base.lhs);
    const cplx S = out.expected.at(mu);
    cplx num = 0.0;
    double den = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < band.samples.size(); ++i) {
      const auto x = band.coord(i);
      double ph = 0.0;
      for (int d = 0; d < n; ++d) ph += mu[d] * x[d];
      const cplx eg = std::polar(1.0, 2.0 * std::numbers::pi * ph) * w.theta.g[i];
      diff = std::max(diff, std::abs(band[i] - S * eg));
      num += band[i] * std::conj(eg);
      den += std::norm(eg);
    }
    band_res = std::max(band_res, diff / scale);
    const cplx c = den > 0.0 ? num / den : 0.0;
    out.recovered.entries[mu] = c;
    coef_err = std::max(coef_err, std::abs(c - S));
  }
  out.band_residual = band_res;
  out.coefficient_error = smax > 0.0 ? coef_err / smax : coef_err;
  return out;
}

// ---------------------------------------------------------------------------
// Norm estimation

double ratio_S(const LatticeCoefficients& a, const Sequence& b1, const Sequence& b2, double q1, double q2, double q) {
  const double den = lq_seq_norm(b1, q1) * lq_seq_norm(b2, q2);
  if (den == 0.0) return 0.0;
  return lq_seq_norm(apply_S(a, b1, b2), q) / den;
}

namespace {

// Exponential tables e^{2 pi i k x_i} on the uniform torus grid x_i = i / P.
class TorusEval {
 public:
  TorusEval(int n, int points, int kmax) : n_(n), P_(points), kmax_(kmax) {
    if (points < 1) throw std::invalid_argument("torus grid needs at least one point");
    table_.resize(static_cast<std::size_t>(2 * kmax + 1) * P_);
    for (int k = -kmax; k <= kmax; ++k)
      for (int i = 0; i < P_; ++i) {
        // exact phase reduction keeps the table free of large arguments
        const long long r = ((static_cast<long long>(k) * i) % P_ + P_) % P_;
        table_[(k + kmax) * P_ + i] = std::polar(1.0, 2.0 * std::numbers::pi * r / P_);
      }
  }

  int kmax() const { return kmax_; }
  std::size_t size() const { return n_ == 1 ? P_ : static_cast<std::size_t>(P_) * P_; }

  std::vector<cplx> values(const std::map<IntVec, cplx>& coeffs) const {
    std::vector<cplx> out(size(), 0.0);
    for (const auto& [k, c] : coeffs) {
      if (c == 0.0) continue;
      for (int d = 0; d < n_; ++d)
        if (std::abs(k[d]) > kmax_) throw std::invalid_argument("torus evaluation: mode outside the table");
      const cplx* e0 = &table_[(k[0] + kmax_) * P_];
      if (n_ == 1) {
        for (int i = 0; i < P_; ++i) out[i] += c * e0[i];
      } else {
        const cplx* e1 = &table_[(k[1] + kmax_) * P_];
        for (int i = 0; i < P_; ++i) {
          const cplx ci = c * e0[i];
          cplx* row = &out[static_cast<std::size_t>(i) * P_];
          for (int j = 0; j < P_; ++j) row[j] += ci * e1[j];
        }
      }
    }
    return out;
  }

  double norm(const std::map<IntVec, cplx>& coeffs, double p) const {
    const auto v = values(coeffs);
    std::vector<double> m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m[i] = std::abs(v[i]);
    return weighted_power_norm(m, p, 1.0 / static_cast<double>(size()));
  }

 private:
  int n_, P_, kmax_;
  std::vector<cplx> table_;
};

int max_mode(const std::map<IntVec, cplx>& c) {
  int m = 0;
  for (const auto& [k, v] : c) m = std::max(m, sup_norm(k));
  return m;
}

}  // namespace

double torus_norm(const TrigPolynomial& F, double p, int points) {
  return TorusEval(F.n, points, max_mode(F.coeffs)).norm(F.coeffs, p);
}

double ratio_T_period(const LatticeCoefficients& a, const TrigPolynomial& F1, const TrigPolynomial& F2, double p1,
                      double p2, double p, int points) {
  const auto T = apply_T_period(a, F1, F2);
  const TorusEval ev(F1.n, points, std::max({max_mode(F1.coeffs), max_mode(F2.coeffs), max_mode(T.coeffs)}));
  const double den = ev.norm(F1.coeffs, p1) * ev.norm(F2.coeffs, p2);
  return den == 0.0 ? 0.0 : ev.norm(T.coeffs, p) / den;
}

double space_norm(const GridFunction& f, double p, double q, SpaceKind space, const Window& kappa,
                  std::span<const double> offset) {
  return space == SpaceKind::amalgam ? amalgam_norm(f, p, q) : wiener_norm(f, p, q, kappa, offset);
}

double ratio_T_sigma(const SymbolGrid& sigma, const GridFunction& f1, const GridFunction& f2, const ExponentTuple& e,
                     SpaceKind space, const Window& kappa, std::span<const double> witness) {
  const int n = f1.spec.dim();
  std::array<double, 2> o1{}, o2{}, o{};
  if (!witness.empty())
    for (int d = 0; d < n; ++d) {
      o1[d] = witness[d];
      o2[d] = witness[n + d];
      o[d] = o1[d] + o2[d];
    }
  auto sp = [n](const std::array<double, 2>& v) { return std::span<const double>(v.data(), n); };
  const double den = space_norm(f1, e.p1, e.q1, space, kappa, sp(o1)) * space_norm(f2, e.p2, e.q2, space, kappa, sp(o2));
  if (den == 0.0) return 0.0;
  const auto T = apply_T_sigma(sigma, f1, f2);
  return space_norm(T, e.p, e.q, space, kappa, sp(o)) / den;
}

namespace {

struct Candidate {
  std::vector<cplx> z1, z2;
};

struct AscentResult {
  Candidate best;
  double value = 0.0;
  SearchTrace trace;
};

// Multi-start coordinate ascent on a ratio that is invariant under scaling of
// z1 and z2 separately. `normalize` rescales both blocks to unit norm.
AscentResult ascend(std::size_t d1, std::size_t d2, const std::function<double(const Candidate&)>& objective,
                    const std::function<void(Candidate&)>& normalize, const std::vector<Candidate>& seeds,
                    const SearchParams& params) {
  if (params.starts < 1 || params.steps < 0) throw std::invalid_argument("search: starts >= 1 and steps >= 0 required");
  if (!(params.shrink > 0.0 && params.shrink < 1.0)) throw std::invalid_argument("search: shrink must lie in (0, 1)");
  const std::size_t S = params.starts;
  std::vector<Candidate> best(S);
  std::vector<double> value(S, 0.0);
  std::vector<std::vector<double>> hist(S);
  std::vector<long> evals(S, 0);

  parallel_for(
      S,
      [&](std::size_t s) {
        std::mt19937_64 rng(params.seed + s);
        std::normal_distribution<double> nd;
        auto gauss = [&] { return cplx(nd(rng), nd(rng)) / std::numbers::sqrt2; };
        Candidate c;
        if (s < seeds.size()) {
          c = seeds[s];
        } else {
          c.z1.resize(d1);
          c.z2.resize(d2);
          for (auto& v : c.z1) v = gauss();
          for (auto& v : c.z2) v = gauss();
        }
        normalize(c);
        double cur = objective(c);
        long ev = 1;
        std::vector<double> step(d1 + d2, 0.5);
        for (int it = 0; it < params.steps; ++it) {
          for (std::size_t k = 0; k < d1 + d2; ++k) {
            Candidate t = c;
            cplx& slot = k < d1 ? t.z1[k] : t.z2[k - d1];
            slot += step[k] * gauss();
            const double r = objective(t);
            ++ev;
            if (r > cur) {
              normalize(t);
              c = std::move(t);
              cur = r;
            } else {
              step[k] *= params.shrink;
            }
          }
          hist[s].push_back(cur);
          if (*std::max_element(step.begin(), step.end()) < 1e-9) break;
        }
        best[s] = std::move(c);
        value[s] = cur;
        evals[s] = ev;
      },
      params.threads);

  AscentResult out;
  std::size_t win = 0;
  for (std::size_t s = 1; s < S; ++s)
    if (value[s] > value[win]) win = s;
  out.best = best[win];
  out.value = value[win];
  out.trace.seed = params.seed;
  out.trace.starts = params.starts;
  out.trace.steps = params.steps;
  out.trace.winning_start = static_cast<int>(win);
  out.trace.start_best = value;
  out.trace.history = hist[win];
  for (long e : evals) out.trace.evaluations += e;
  return out;
}

std::vector<IntVec> inflated_box(const std::vector<IntVec>& pts, int n, int margin) {
  IntVec lo = pts.front(), hi = pts.front();
  for (const auto& p : pts)
    for (int d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  for (int d = 0; d < n; ++d) {
    lo[d] -= margin;
    hi[d] += margin;
  }
  return lattice_box(n, lo, hi);
}

std::map<IntVec, cplx> to_map(const std::vector<IntVec>& coords, const std::vector<cplx>& z) {
  std::map<IntVec, cplx> m;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (z[i] != 0.0) m[coords[i]] = z[i];
  return m;
}

// Structured starting points: the delta pair at the largest coefficient of a
// and the indicator pair of the projections.
std::vector<Candidate> structured_seeds(const LatticeCoefficients& a, const std::vector<IntVec>& c1,
                                        const std::vector<IntVec>& c2) {
  auto idx = [](const std::vector<IntVec>& c, const IntVec& k) {
    return static_cast<std::size_t>(std::find(c.begin(), c.end(), k) - c.begin());
  };
  std::vector<Candidate> seeds;
  LatticePair top = a.entries.begin()->first;
  double best = -1.0;
  for (const auto& [k, v] : a.entries)
    if (std::abs(v) > best) {
      best = std::abs(v);
      top = k;
    }
  Candidate d{std::vector<cplx>(c1.size()), std::vector<cplx>(c2.size())};
  d.z1[idx(c1, top.first)] = 1.0;
  d.z2[idx(c2, top.second)] = 1.0;
  seeds.push_back(d);
  Candidate ind{std::vector<cplx>(c1.size()), std::vector<cplx>(c2.size())};
  for (const auto& p : a.projection(0)) ind.z1[idx(c1, p)] = 1.0;
  for (const auto& p : a.projection(1)) ind.z2[idx(c2, p)] = 1.0;
  seeds.push_back(ind);
  return seeds;
}

}  // namespace

NormEstimate estimate_norm_S(const LatticeCoefficients& a, double q1, double q2, double q, const SearchParams& params) {
  if (a.empty()) throw std::invalid_argument("estimate_norm_S: empty coefficient set");
  for (double v : {q1, q2, q}) check_exponent(v);
  const int n = a.n;
  const auto c1 = inflated_box(a.projection(0), n, params.support_margin);
  const auto c2 = inflated_box(a.projection(1), n, params.support_margin);
  auto seq = [n](const std::vector<IntVec>& c, const std::vector<cplx>& z) { return Sequence{n, to_map(c, z)}; };
  auto objective = [&](const Candidate& c) { return ratio_S(a, seq(c1, c.z1), seq(c2, c.z2), q1, q2, q); };
  auto normalize = [&](Candidate& c) {
    for (auto [z, e] : {std::pair{&c.z1, q1}, std::pair{&c.z2, q2}}) {
      std::vector<double> m(z->size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs((*z)[i]);
      const double r = lq_seq_norm(m, e);
      if (r > 0.0)
        for (auto& v : *z) v /= r;
    }
  };
  const auto res = ascend(c1.size(), c2.size(), objective, normalize, structured_seeds(a, c1, c2), params);
  NormEstimate out;
  out.value = res.value;
  out.pool = "ascent";
  out.w1 = seq(c1, res.best.z1);
  out.w2 = seq(c2, res.best.z2);
  out.trace = res.trace;
  return out;
}

NormEstimate estimate_norm_T_period(const LatticeCoefficients& a, double p1, double p2, double p,
                                    const SearchParams& params) {
  if (a.empty()) throw std::invalid_argument("estimate_norm_T_period: empty coefficient set");
  for (double v : {p1, p2, p}) check_exponent(v);
  const int n = a.n;
  const auto c1 = inflated_box(a.projection(0), n, params.mode_margin);
  const auto c2 = inflated_box(a.projection(1), n, params.mode_margin);
  int kmax = 0;
  for (const auto& k : c1) kmax = std::max(kmax, sup_norm(k));
  for (const auto& k : c2) kmax = std::max(kmax, sup_norm(k));
  const TorusEval ev(n, params.torus_points, 2 * kmax);
  auto objective = [&](const Candidate& c) {
    const auto m1 = to_map(c1, c.z1), m2 = to_map(c2, c.z2);
    const double den = ev.norm(m1, p1) * ev.norm(m2, p2);
    if (den == 0.0) return 0.0;
    const auto S = apply_S(a, Sequence{n, m1}, Sequence{n, m2});
    return ev.norm(S.entries, p) / den;
  };
  auto normalize = [&](Candidate& c) {
    const double r1 = ev.norm(to_map(c1, c.z1), p1), r2 = ev.norm(to_map(c2, c.z2), p2);
    if (r1 > 0.0)
      for (auto& v : c.z1) v /= r1;
    if (r2 > 0.0)
      for (auto& v : c.z2) v /= r2;
  };
  const auto res = ascend(c1.size(), c2.size(), objective, normalize, structured_seeds(a, c1, c2), params);
  NormEstimate out;
  out.value = res.value;
  out.pool = "ascent";
  out.w1 = Sequence{n, to_map(c1, res.best.z1)};
  out.w2 = Sequence{n, to_map(c2, res.best.z2)};
  out.trace = res.trace;
  return out;
}

NormEstimate estimate_model_norm(const LatticeCoefficients& a, const ExponentTuple& e, SpaceKind space,
                                 const SearchParams& params) {
  return space == SpaceKind::amalgam ? estimate_norm_T_period(a, e.p1, e.p2, e.p, params)
                                     : estimate_norm_S(a, e.q1, e.q2, e.q, params);
}

ContinuumSetup make_continuum_setup(const BumpProfile& phi, const GridSpec& spec, double window_outer) {
  return {spec, make_window(spec.dim(), window_outer), default_theta_pair(phi, spec)};
}

NormEstimate estimate_norm_T_aPhi(const LatticeCoefficients& a, const BumpProfile& phi, const ExponentTuple& e,
                                  SpaceKind space, const ContinuumSetup& setup, const SearchParams& params,
                                  const NormEstimate* model) {
  NormEstimate out;
  out.trace.seed = params.seed;
  if (a.empty() || a.sup_abs() == 0.0) {
    out.pool = "zero";
    return out;
  }
  const GridSpec& g = setup.spec;
  const int n = g.dim();
  const auto sigma = synth_sigma(a, phi, g);
  const auto& wit = setup.theta.witness;

  NormEstimate own;
  if (!model) {
    own = estimate_model_norm(a, e, space, params);
    model = &own;
  }

  // pool (i): the proof witness built from the model maximizer
  {
    const auto w = space == SpaceKind::amalgam
                       ? build_amalgam_witness(TrigPolynomial::from_sequence(model->w1),
                                               TrigPolynomial::from_sequence(model->w2), setup.theta)
                       : build_wiener_witness(model->w1, model->w2, setup.theta, setup.kappa);
    out.value = ratio_T_sigma(sigma, w.f1, w.f2, e, space, setup.kappa, wit);
    out.pool = "witness";
    out.functions = std::make_pair(w.f1, w.f2);
    out.w1 = model->w1;
    out.w2 = model->w2;
  }

  // pool (ii): random band-limited pairs, bumps of random radius at modes near the projections
  const auto c1 = inflated_box(a.projection(0), n, params.mode_margin);
  const auto c2 = inflated_box(a.projection(1), n, params.mode_margin);
  const std::size_t R = std::max(0, params.random_pool);
  std::vector<std::pair<GridFunction, GridFunction>> cand(R);
  std::vector<double> val(R, 0.0);
  parallel_for(
      R,
      [&](std::size_t r) {
        std::mt19937_64 rng(params.seed + 1000003ull * (r + 1));
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> rad(0.1, 0.45);
        auto make = [&](const std::vector<IntVec>& modes, int block) {
          std::vector<double> c(n);
          for (int d = 0; d < n; ++d) c[d] = wit[block * n + d];
          const auto th = make_bump(BumpKind::radial_exp, c, {rad(rng)});
          Sequence s{n, {}};
          for (const auto& k : modes) s.entries[k] = cplx(nd(rng), nd(rng));
          return modulated_sum(s, th, g);
        };
        cand[r].first = make(c1, 0);
        cand[r].second = make(c2, 1);
        val[r] = ratio_T_sigma(sigma, cand[r].first, cand[r].second, e, space, setup.kappa, wit);
      },
      params.threads);
  for (std::size_t r = 0; r < R; ++r)
    if (val[r] > out.value) {
      out.value = val[r];
      out.pool = "random";
      out.functions = cand[r];
      out.w1 = out.w2 = Sequence{n, {}};
    }
  out.trace.starts = static_cast<int>(R) + 1;
  out.trace.start_best.push_back(out.pool == "witness" ? out.value : 0.0);
  out.trace.start_best.insert(out.trace.start_best.end(), val.begin(), val.end());
  out.trace.evaluations = static_cast<long>(R) + 1;
  return out;
}

TransferReport transference_report(const std::vector<LatticeCoefficients>& family, const BumpProfile& phi,
                                   const ExponentTuple& e, SpaceKind space, const ContinuumSetup& setup,
                                   const SearchParams& params, double stability_bound) {
  require_exponent_hypothesis(e, space);
  TransferReport rep;
  rep.space = space;
  rep.exponents = e;
  rep.stability_bound = stability_bound;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  rep.ratios_finite = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    TransferRow row;
    row.index = static_cast<int>(i);
    row.model = estimate_model_norm(family[i], e, space, params);
    row.continuum = estimate_norm_T_aPhi(family[i], phi, e, space, setup, params, &row.model);
    row.ratio = row.continuum.value / row.model.value;
    const bool ok = std::isfinite(row.ratio) && row.ratio > 0.0;
    rep.ratios_finite = rep.ratios_finite && ok;
    if (ok) {
      rep.min_ratio = std::min(rep.min_ratio, row.ratio);
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.spread = rep.ratios_finite && !rep.rows.empty() ? rep.max_ratio / rep.min_ratio
                                                      : std::numeric_limits<double>::infinity();
  rep.stable = rep.ratios_finite && rep.spread <= stability_bound;
  return rep;
}

LatticeCoefficients random_coefficients(int n, int support, int radius, std::uint64_t seed) {
  if (n != 1 && n != 2) throw std::invalid_argument("random_coefficients: n must be 1 or 2");
  const auto box = lattice_box(n, {-radius, -radius}, {radius, radius});
  if (support < 1 || static_cast<std::size_t>(support) > box.size() * box.size())
    throw std::invalid_argument("random_coefficients: support size out of range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, box.size() - 1);
  std::normal_distribution<double> nd;
  LatticeCoefficients a;
  a.n = n;
  while (static_cast<int>(a.entries.size()) < support) {
    const LatticePair k{box[pick(rng)], box[pick(rng)]};
    if (!a.entries.count(k)) a.entries[k] = cplx(nd(rng), nd(rng));
  }
  return a;
}

}  // namespace latbump

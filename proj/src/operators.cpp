#include "latbump/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace latbump {
namespace {

void require_same(const GridSpec& a, const GridSpec& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid specs differ");
}

void require_space(const GridFunction& f, const char* who) {
  if (f.side != Side::space) throw std::invalid_argument(std::string(who) + ": expected a space-side function");
}

std::size_t wrapped_flat(const GridSpec& g, const IntVec& k) {
  return g.flat({g.wrap(k[0]), g.dim() == 2 ? g.wrap(k[1]) : 0});
}

IntVec centered_of(const GridSpec& g, std::size_t f) {
  const IntVec idx = g.unflat(f);
  return {g.centered(idx[0]), g.dim() == 2 ? g.centered(idx[1]) : 0};
}

}  // namespace

GridFunction apply_T_sigma(const SymbolGrid& sigma, const GridFunction& f1, const GridFunction& f2,
                           OperatorDiagnostics* diag) {
  require_space(f1, "apply_T_sigma");
  require_space(f2, "apply_T_sigma");
  require_same(sigma.spec, f1.spec, "apply_T_sigma");
  require_same(sigma.spec, f2.spec, "apply_T_sigma");
  const GridSpec& g = sigma.spec;
  const auto F1 = dft(f1), F2 = dft(f2);
  const std::size_t S = g.size();

  std::vector<IntVec> coords(S);
  std::vector<bool> live2(S);
  for (std::size_t f = 0; f < S; ++f) {
    coords[f] = centered_of(g, f);
    live2[f] = F2[f] != 0.0;
  }

  GridFunction out = GridFunction::zeros(g, Side::frequency);
  double total = 0.0, aliased = 0.0;
  for (std::size_t a1 = 0; a1 < S; ++a1) {
    const cplx u = F1[a1];
    if (u == 0.0) continue;
    const cplx* row = &sigma.samples[a1 * S];
    for (std::size_t a2 = 0; a2 < S; ++a2) {
      if (!live2[a2] || row[a2] == 0.0) continue;
      const cplx v = row[a2] * u * F2[a2];
      const IntVec z = coords[a1] + coords[a2];
      bool inside = g.in_range(z[0]) && (g.dim() == 1 || g.in_range(z[1]));
      const double e = std::norm(v);
      total += e;
      if (!inside) aliased += e;
      out[wrapped_flat(g, z)] += v;
    }
  }
  const double w = std::pow(g.freq_step(), g.dim());
  for (auto& v : out.samples) v *= w;
  if (diag) {
    diag->aliased_fraction = total > 0.0 ? aliased / total : 0.0;
    // Round-off in dft(f) populates every frequency at the 1e-16 level.
    if (diag->aliased_fraction > 1e-20) {
      std::ostringstream os;
      os << "apply_T_sigma: " << diag->aliased_fraction
         << " of the product energy wrapped around the frequency box (inputs not band-limited to s/4)";
      diag->warnings.push_back(os.str());
    }
  }
  return idft(out);
}

GridFunction apply_T_symbol(const FreqFn& sigma, const GridFunction& f1, const GridFunction& f2,
                            OperatorDiagnostics* diag) {
  require_same(f1.spec, f2.spec, "apply_T_symbol");
  const GridSpec& g = f1.spec;
  const int n = g.dim();
  const auto F1 = f1.side == Side::space ? dft(f1) : f1;
  const auto F2 = f2.side == Side::space ? dft(f2) : f2;
  std::vector<std::size_t> nz1, nz2;
  for (std::size_t q = 0; q < F1.samples.size(); ++q) {
    if (F1[q] != 0.0) nz1.push_back(q);
    if (F2[q] != 0.0) nz2.push_back(q);
  }
  GridFunction out = GridFunction::zeros(g, Side::frequency);
  double total = 0.0, aliased = 0.0;
  for (std::size_t a1 : nz1) {
    const auto x1 = F1.coord(a1);
    const IntVec k1 = centered_of(g, a1);
    for (std::size_t a2 : nz2) {
      const auto x2 = F2.coord(a2);
      std::array<double, 4> xi{};
      for (int d = 0; d < n; ++d) {
        xi[d] = x1[d];
        xi[n + d] = x2[d];
      }
      const cplx s = sigma(std::span<const double>(xi.data(), 2 * n));
      if (s == 0.0) continue;
      const cplx v = s * F1[a1] * F2[a2];
      const IntVec z = k1 + centered_of(g, a2);
      const bool inside = g.in_range(z[0]) && (n == 1 || g.in_range(z[1]));
      total += std::norm(v);
      if (!inside) aliased += std::norm(v);
      out[wrapped_flat(g, z)] += v;
    }
  }
  const double w = std::pow(g.freq_step(), n);
  for (auto& v : out.samples) v *= w;
  if (diag) {
    diag->aliased_fraction = total > 0.0 ? aliased / total : 0.0;
    if (diag->aliased_fraction > 1e-20) diag->warnings.push_back("apply_T_symbol: product energy wrapped around the frequency box");
  }
  return idft(out);
}

GridFunction apply_T_aPhi_fast(const LatticeCoefficients& a, const CMDecomposition& d,
                               const GridFunction& f1, const GridFunction& f2) {
  require_space(f1, "apply_T_aPhi_fast");
  require_space(f2, "apply_T_aPhi_fast");
  require_same(f1.spec, f2.spec, "apply_T_aPhi_fast");
  const GridSpec& g = f1.spec;
  const int n = g.dim();
  if (d.n != n) throw std::invalid_argument("apply_T_aPhi_fast: dimension mismatch");
  GridFunction out = GridFunction::zeros(g, Side::space);
  if (a.empty()) return out;

  const std::size_t S = g.size();
  const std::vector<IntVec> ks = lattice_box(n, {-d.M, -d.M}, {d.M, d.M});
  const std::size_t nk = ks.size();  // (2M+1)^n

  // g^j_{mu,k} = phi_k(D - mu) f_j, phi_k(xi) = e^{2 pi i xi.k / K} phi(xi).
  auto factors = [&](const GridFunction& f, const std::vector<IntVec>& mus) {
    const auto F = dft(f);
    std::map<IntVec, std::vector<GridFunction>> res;
    for (const auto& mu : mus) {
      std::vector<double> cut(S);
      std::vector<std::array<double, 2>> eta(S);
      for (std::size_t q = 0; q < S; ++q) {
        const auto c = F.coord(q);
        for (int dd = 0; dd < n; ++dd) eta[q][dd] = c[dd] - mu[dd];
        cut[q] = bump_eval(d.cutoff, std::span<const double>(eta[q].data(), n)).real();
      }
      auto& vec = res[mu];
      vec.reserve(nk);
      for (const auto& k : ks) {
        GridFunction G = GridFunction::zeros(g, Side::frequency);
        for (std::size_t q = 0; q < S; ++q) {
          if (cut[q] == 0.0 || F[q] == 0.0) continue;
          double t = 0.0;
          for (int dd = 0; dd < n; ++dd) t += eta[q][dd] * k[dd];
          t /= d.K;
          t -= std::floor(t);
          G[q] = std::polar(cut[q], 2.0 * std::numbers::pi * t) * F[q];
        }
        vec.push_back(idft(G));
      }
    }
    return res;
  };
  const auto g1 = factors(f1, a.projection(0));
  const auto g2 = factors(f2, a.projection(1));

  // H_{mu2}[k1] = sum_{k2} b(k1,k2) g2_{mu2,k2}; b is stored with k1 axes slowest.
  std::map<IntVec, std::vector<std::vector<cplx>>> H;
  for (const auto& [mu2, gk] : g2) {
    auto& h = H[mu2];
    h.assign(nk, std::vector<cplx>(S));
    for (std::size_t i1 = 0; i1 < nk; ++i1) {
      for (std::size_t i2 = 0; i2 < nk; ++i2) {
        const cplx b = d.coeffs[i1 * nk + i2];
        if (b == 0.0) continue;
        const auto& src = gk[i2].samples;
        auto& dst = h[i1];
        for (std::size_t q = 0; q < S; ++q) dst[q] += b * src[q];
      }
    }
  }

  for (const auto& [mu, val] : a.entries) {
    if (val == 0.0) continue;
    const auto& gk = g1.at(mu.first);
    const auto& h = H.at(mu.second);
    for (std::size_t i1 = 0; i1 < nk; ++i1) {
      const auto& x1 = gk[i1].samples;
      const auto& x2 = h[i1];
      for (std::size_t q = 0; q < S; ++q) out[q] += val * x1[q] * x2[q];
    }
  }
  return out;
}

Sequence apply_S(const LatticeCoefficients& a, const Sequence& b1, const Sequence& b2) {
  if (a.n != b1.n || a.n != b2.n) throw std::invalid_argument("apply_S: dimension mismatch");
  Sequence out;
  out.n = a.n;
  for (const auto& [mu, val] : a.entries) {
    const auto i1 = b1.entries.find(mu.first);
    if (i1 == b1.entries.end()) continue;
    const auto i2 = b2.entries.find(mu.second);
    if (i2 == b2.entries.end()) continue;
    out.entries[mu.first + mu.second] += val * i1->second * i2->second;
  }
  return out;
}

TrigPolynomial apply_T_period(const LatticeCoefficients& a, const TrigPolynomial& F1, const TrigPolynomial& F2) {
  return TrigPolynomial::from_sequence(apply_S(a, F1.as_sequence(), F2.as_sequence()));
}

GridFunction apply_linear_mult(const FreqFn& m, const GridFunction& f) {
  require_space(f, "apply_linear_mult");
  auto F = dft(f);
  const int n = f.spec.dim();
  for (std::size_t q = 0; q < F.samples.size(); ++q) {
    if (F[q] == 0.0) continue;
    const auto c = F.coord(q);
    F[q] *= m(std::span<const double>(c.data(), n));
  }
  return idft(F);
}

GridFunction apply_linear_mult(const GridFunction& m, const GridFunction& f) {
  if (m.side != Side::frequency) throw std::invalid_argument("apply_linear_mult: multiplier must be frequency-side");
  require_space(f, "apply_linear_mult");
  require_same(m.spec, f.spec, "apply_linear_mult");
  auto F = dft(f);
  for (std::size_t q = 0; q < F.samples.size(); ++q) F[q] *= m[q];
  return idft(F);
}

GridFunction apply_linear_mult(const Window& kappa, const GridFunction& f) {
  return apply_linear_mult([&](std::span<const double> xi) { return cplx(kappa.eval(xi)); }, f);
}

GridFunction apply_linear_mult(const BumpProfile& m, const GridFunction& f) {
  return apply_linear_mult([&](std::span<const double> xi) { return bump_eval(m, xi); }, f);
}

GridFunction band_project(const Window& kappa, const IntVec& mu, std::span<const double> offset,
                          const GridFunction& f) {
  const int n = f.spec.dim();
  const double half = f.spec.rate() / 2.0;
  for (int d = 0; d < n; ++d)
    if (mu[d] < -half || mu[d] >= half) throw std::invalid_argument("band_project: band center outside the frequency box");
  std::array<double, 2> shift{};
  for (int d = 0; d < n; ++d) shift[d] = mu[d] + (offset.empty() ? 0.0 : offset[d]);
  return apply_linear_mult(
      [&](std::span<const double> xi) {
        return cplx(kappa.eval_shifted(xi, std::span<const double>(shift.data(), n)));
      },
      f);
}

GridFunction band_project(const Window& kappa, const IntVec& mu, const GridFunction& f) {
  return band_project(kappa, mu, {}, f);
}

double out_of_band_fraction(const GridFunction& f, double radius) {
  const auto F = f.side == Side::space ? dft(f) : f;
  double total = 0.0, outside = 0.0;
  for (std::size_t q = 0; q < F.samples.size(); ++q) {
    const double e = std::norm(F[q]);
    total += e;
    const auto c = F.coord(q);
    double r = 0.0;
    for (int d = 0; d < F.spec.dim(); ++d) r = std::max(r, std::abs(c[d]));
    if (r > radius) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

double translate_square_sum_sup(const FreqFn& phi, int n, double extent, int per_axis) {
  const int R = static_cast<int>(std::ceil(extent)) + 1;
  const auto mus = lattice_box(n, {-R, -R}, {R, R});
  const auto pts = lattice_box(n, {0, 0}, {per_axis - 1, per_axis - 1});
  double best = 0.0;
  for (const auto& p : pts) {
    std::array<double, 2> xi{};
    for (int d = 0; d < n; ++d) xi[d] = static_cast<double>(p[d]) / per_axis;
    double s = 0.0;
    for (const auto& mu : mus) {
      std::array<double, 2> y{};
      for (int d = 0; d < n; ++d) y[d] = xi[d] - mu[d];
      s += std::norm(phi(std::span<const double>(y.data(), n)));
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace latbump

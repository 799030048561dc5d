#include "latbump/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace latbump {
namespace {

// Visits every point of the integer box [lo, hi] (inclusive) in row-major order.
template <class F>
void for_each_point(const std::vector<int>& lo, const std::vector<int>& hi, F&& fn) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return;
  std::vector<int> p = lo;
  while (true) {
    fn(p);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (p[i] < hi[i]) {
        ++p[i];
        break;
      }
      p[i] = lo[i];
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// One axis of a separable profile, centered as the original.
BumpProfile axis_profile(const BumpProfile& phi, int i) {
  BumpProfile b;
  b.kind = phi.kind;
  b.center = {phi.center[i]};
  b.radius = {phi.radius[i]};
  if (phi.kind == BumpKind::plateau) b.inner = {phi.inner[i]};
  return b;
}

}  // namespace

SymbolGrid SymbolGrid::zeros(const GridSpec& spec) {
  const std::size_t total = spec.size() * spec.size();
  if (total > kMaxSymbolSamples)
    throw std::invalid_argument("symbol grid exceeds 2^24 samples; reduce L or s");
  return {spec, std::vector<cplx>(total)};
}

double SymbolGrid::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples) m = std::max(m, std::abs(v));
  return m;
}

int overlap_count(const LatticeCoefficients& a, const BumpProfile& phi) {
  // A half-open interval of length 2r contains at most ceil(2r) integers.
  long long per_point = 1;
  for (double r : phi.radius) per_point *= static_cast<long long>(std::ceil(2.0 * r));
  return static_cast<int>(std::min<long long>(per_point, static_cast<long long>(a.entries.size())));
}

SymbolGrid synth_sigma(const LatticeCoefficients& a, const BumpProfile& phi, const GridSpec& spec) {
  const int n = spec.dim();
  if (phi.dim() != 2 * n) throw std::invalid_argument("synth_sigma: Phi must live on R^n x R^n");
  SymbolGrid out = SymbolGrid::zeros(spec);
  const int L = spec.box();
  const double half = spec.rate() / 2.0;

  for (const auto& [mu, val] : a.entries) {
    if (val == 0.0) continue;
    std::vector<double> shift(2 * n);
    for (int d = 0; d < n; ++d) {
      shift[d] = mu.first[d];
      shift[n + d] = mu.second[d];
    }
    std::vector<int> lo(2 * n), hi(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
      const double c = phi.center[i] + shift[i], r = phi.radius[i];
      if (c - r < -half || c + r >= half)
        throw std::invalid_argument("synth_sigma: translated support leaves the frequency box");
      lo[i] = static_cast<int>(std::floor((c - r) * L));
      hi[i] = static_cast<int>(std::ceil((c + r) * L));
      lo[i] = std::max(lo[i], -spec.points() / 2);
      hi[i] = std::min(hi[i], spec.points() / 2 - 1);
    }
    std::vector<double> xi(2 * n);
    for_each_point(lo, hi, [&](const std::vector<int>& k) {
      for (int i = 0; i < 2 * n; ++i) xi[i] = static_cast<double>(k[i]) / L - shift[i];
      const cplx v = bump_eval(phi, xi);
      if (v == 0.0) return;
      const IntVec i1{spec.wrap(k[0]), n == 2 ? spec.wrap(k[1]) : 0};
      const IntVec i2{spec.wrap(k[n]), n == 2 ? spec.wrap(k[n + 1]) : 0};
      out.at(spec.flat(i1), spec.flat(i2)) += val * v;
    });
  }
  return out;
}

std::size_t CMDecomposition::index(const IntVec& k1, const IntVec& k2) const {
  const std::size_t S = side();
  std::size_t f = 0;
  for (int d = 0; d < n; ++d) f = f * S + static_cast<std::size_t>(k1[d] + M);
  for (int d = 0; d < n; ++d) f = f * S + static_cast<std::size_t>(k2[d] + M);
  return f;
}

cplx CMDecomposition::at(const IntVec& k1, const IntVec& k2) const {
  for (int d = 0; d < n; ++d)
    if (std::abs(k1[d]) > M || std::abs(k2[d]) > M) return 0.0;
  return coeffs[index(k1, k2)];
}

double CMDecomposition::abs_sum() const {
  double s = 0.0;
  for (const auto& v : coeffs) s += std::abs(v);
  return s;
}

int default_period(const BumpProfile& phi) {
  return 2 * static_cast<int>(std::ceil(2.0 * phi.extent() - 1e-12));
}

int default_truncation(int n) { return n == 1 ? 128 : 8; }

CMDecomposition cm_decompose(const BumpProfile& phi, int K, int M, int quad_points) {
  if (phi.dim() % 2 != 0 || phi.dim() > 4) throw std::invalid_argument("cm_decompose: Phi must live on R^n x R^n, n <= 2");
  const int n = phi.dim() / 2;
  if (K <= 0) K = default_period(phi);
  if (K % 2 != 0) throw std::invalid_argument("cm_decompose: period K must be an even integer");
  if (M < 0) throw std::invalid_argument("cm_decompose: truncation must be nonnegative");
  for (int i = 0; i < 2 * n; ++i)
    if (std::abs(phi.center[i]) + phi.radius[i] > K / 4.0)
      throw std::invalid_argument("cm_decompose: support of Phi does not fit K Q / 2 for K = " + std::to_string(K));

  CMDecomposition d;
  d.n = n;
  d.K = K;
  d.M = M;
  d.cutoff = make_plateau(n, K / 4.0, K / 2.0);
  d.separable = phi.kind != BumpKind::radial_exp;
  const int S = d.side();
  const int axes = 2 * n;
  d.coeffs.assign(ipow(S, axes), 0.0);

  std::size_t P = quad_points > 0 ? static_cast<std::size_t>(quad_points)
                                  : next_pow2(static_cast<std::size_t>(4 * S));
  if (d.separable && quad_points <= 0) P = std::max<std::size_t>(P, 4096);
  if (P % 2 != 0) ++P;
  if (P < static_cast<std::size_t>(4 * S)) throw std::invalid_argument("cm_decompose: fewer than 4(2M+1) quadrature nodes");
  d.quadrature_points = static_cast<int>(P);
  const int half = static_cast<int>(P / 2);
  const double h = static_cast<double>(K) / P;

  if (d.separable) {
    // b(k) = amplitude * prod_i c_i(k_i) with 1D trapezoid coefficients c_i.
    std::vector<std::vector<cplx>> c(axes);
    double total = std::abs(phi.amplitude), inside = std::abs(phi.amplitude);
    for (int i = 0; i < axes; ++i) {
      const BumpProfile prof = axis_profile(phi, i);
      std::vector<cplx> v(P);
      for (std::size_t j = 0; j < P; ++j) {
        const double t = (static_cast<int>(j) - half) * h;
        v[j] = bump_eval(prof, std::span<const double>(&t, 1));
      }
      detail::centered_fft_inplace(v, 1, static_cast<int>(P), -1);
      double all = 0.0, kept = 0.0;
      c[i].resize(S);
      for (int k = -half; k < half; ++k) {
        const cplx ck = v[k + half] / static_cast<double>(P);
        all += std::abs(ck);
        if (std::abs(k) <= M) {
          c[i][k + M] = ck;
          kept += std::abs(ck);
        }
      }
      total *= all;
      inside *= kept;
    }
    std::vector<int> lo(axes, 0), hi(axes, S - 1);
    std::size_t f = 0;
    for_each_point(lo, hi, [&](const std::vector<int>& k) {
      cplx v = phi.amplitude;
      for (int i = 0; i < axes; ++i) v *= c[i][k[i]];
      d.coeffs[f++] = v;
    });
    d.tail_bound = std::max(0.0, total - inside);
    return d;
  }

  const std::size_t total_nodes = ipow(P, axes);
  if (total_nodes > kMaxGridPoints)
    throw std::invalid_argument("cm_decompose: radial quadrature grid exceeds 2^24 nodes; lower M");
  std::vector<cplx> v(total_nodes);
  {
    std::vector<int> lo(axes, -half), hi(axes, half - 1);
    std::vector<double> xi(axes);
    std::size_t f = 0;
    for_each_point(lo, hi, [&](const std::vector<int>& j) {
      for (int i = 0; i < axes; ++i) xi[i] = j[i] * h;
      v[f++] = bump_eval(phi, xi);
    });
  }
  detail::centered_fft_inplace(v, axes, static_cast<int>(P), -1);
  const double w = 1.0 / static_cast<double>(total_nodes);
  double all = 0.0, kept = 0.0;
  std::vector<int> lo(axes, -half), hi(axes, half - 1);
  std::size_t f = 0;
  for_each_point(lo, hi, [&](const std::vector<int>& k) {
    const cplx b = v[f++] * w;
    all += std::abs(b);
    bool in = true;
    for (int i = 0; i < axes; ++i) in = in && std::abs(k[i]) <= M;
    if (!in) return;
    kept += std::abs(b);
    std::size_t idx = 0;
    for (int i = 0; i < axes; ++i) idx = idx * S + static_cast<std::size_t>(k[i] + M);
    d.coeffs[idx] = b;
  });
  d.tail_bound = std::max(0.0, all - kept);
  return d;
}

cplx cm_reconstruct(const CMDecomposition& d, std::span<const double> xi) {
  const int n = d.n, axes = 2 * n, S = d.side();
  const cplx cut = bump_eval(d.cutoff, xi.subspan(0, n)) * bump_eval(d.cutoff, xi.subspan(n, n));
  if (cut == 0.0) return 0.0;
  // Per-axis phase tables e^{2 pi i xi_a k / K}.
  std::vector<std::vector<cplx>> ph(axes, std::vector<cplx>(S));
  for (int a = 0; a < axes; ++a)
    for (int k = -d.M; k <= d.M; ++k) {
      double t = xi[a] * k / d.K;
      t -= std::floor(t);
      ph[a][k + d.M] = std::polar(1.0, 2.0 * std::numbers::pi * t);
    }
  cplx sum{};
  std::vector<int> lo(axes, 0), hi(axes, S - 1);
  std::size_t f = 0;
  for_each_point(lo, hi, [&](const std::vector<int>& k) {
    cplx term = d.coeffs[f++];
    if (term == 0.0) return;
    for (int a = 0; a < axes; ++a) term *= ph[a][k[a]];
    sum += term;
  });
  return sum * cut;
}

SymbolGrid sigma_from_cm(const LatticeCoefficients& a, const CMDecomposition& d, const GridSpec& spec) {
  const int n = spec.dim();
  if (d.n != n) throw std::invalid_argument("sigma_from_cm: dimension mismatch");
  SymbolGrid out = SymbolGrid::zeros(spec);
  const int L = spec.box();
  const int K = static_cast<int>(d.K);
  const int P = K * L;  // patch points per axis, eta = j / L in [-K/2, K/2)
  const int axes = 2 * n;
  const std::size_t patch = ipow(P, axes);
  if (patch > kMaxGridPoints) throw std::invalid_argument("sigma_from_cm: local patch exceeds 2^24 points");

  // Fold b modulo KL: e^{2 pi i j k / (K L)} only sees k mod KL.
  std::vector<cplx> R(patch);
  const int S = d.side();
  {
    std::vector<int> lo(axes, 0), hi(axes, S - 1);
    std::size_t f = 0;
    for_each_point(lo, hi, [&](const std::vector<int>& k) {
      const cplx b = d.coeffs[f++];
      if (b == 0.0) return;
      std::size_t idx = 0;
      for (int a = 0; a < axes; ++a) {
        int kk = ((k[a] - d.M) % P + P) % P;  // in [0, P)
        if (kk >= P / 2) kk -= P;             // centered
        idx = idx * P + static_cast<std::size_t>(kk + P / 2);
      }
      R[idx] += b;
    });
  }
  detail::centered_fft_inplace(R, axes, P, +1);

  // Cutoff factor on the patch.
  std::vector<double> cut1(P);
  for (int j = 0; j < P; ++j) {
    const double eta = static_cast<double>(j - P / 2) / L;
    cut1[j] = bump_eval(d.cutoff.dim() == 1 ? d.cutoff : axis_profile(d.cutoff, 0), std::span<const double>(&eta, 1)).real();
  }

  for (const auto& [mu, val] : a.entries) {
    if (val == 0.0) continue;
    std::vector<int> shift(axes);
    for (int dd = 0; dd < n; ++dd) {
      shift[dd] = mu.first[dd] * L;
      shift[n + dd] = mu.second[dd] * L;
    }
    std::vector<int> lo(axes, 0), hi(axes, P - 1);
    std::size_t f = 0;
    for_each_point(lo, hi, [&](const std::vector<int>& j) {
      const std::size_t here = f++;
      double c = 1.0;
      for (int ax = 0; ax < axes; ++ax) c *= cut1[j[ax]];
      if (c == 0.0) return;
      std::array<int, 4> k{};
      for (int ax = 0; ax < axes; ++ax) {
        k[ax] = j[ax] - P / 2 + shift[ax];
        // Points beyond the frequency box carry only truncation-level mass.
        if (!spec.in_range(k[ax])) return;
      }
      const IntVec i1{spec.wrap(k[0]), n == 2 ? spec.wrap(k[1]) : 0};
      const IntVec i2{spec.wrap(k[n]), n == 2 ? spec.wrap(k[n + 1]) : 0};
      out.at(spec.flat(i1), spec.flat(i2)) += val * c * R[here];
    });
  }
  return out;
}

}  // namespace latbump

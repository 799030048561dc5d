#include "latbump/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "latbump/operators.hpp"
#include "latbump/parallel.hpp"

namespace latbump {

double check_exponent(double p, const char* name) {
  if (!(p > 0.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, inf]");
  return p;
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInf;
  double v = 0.0;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    v = std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  } else {
    std::size_t used = 0;
    v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad exponent '" + s + "'");
  }
  return check_exponent(v);
}

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

double weighted_power_norm(std::span<const double> v, double p, double weight) {
  check_exponent(p);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (double x : v) {
    const double r = std::abs(x) / m;
    if (r > 0.0) s += std::pow(r, p);
  }
  // exp/log keeps (weight s)^{1/p} finite for tiny p.
  return m * std::exp((std::log(weight) + std::log(s)) / p);
}

double lq_seq_norm(std::span<const double> v, double q) { return weighted_power_norm(v, q, 1.0); }

double lq_seq_norm(const Sequence& b, double q) {
  std::vector<double> v;
  v.reserve(b.entries.size());
  for (const auto& [k, x] : b.entries) v.push_back(std::abs(x));
  return lq_seq_norm(v, q);
}

namespace {

std::vector<double> moduli(const GridFunction& f) {
  std::vector<double> v(f.samples.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(f[i]);
  return v;
}

void require_space(const GridFunction& f, const char* who) {
  if (f.side != Side::space) throw std::invalid_argument(std::string(who) + ": expected a space-side function");
}

}  // namespace

double lp_norm(const GridFunction& f, double p) {
  require_space(f, "lp_norm");
  const auto v = moduli(f);
  return weighted_power_norm(v, p, std::pow(f.spec.step(), f.spec.dim()));
}

double lp_norm(const GridFunction& f, double p, const Region& region) {
  require_space(f, "lp_norm");
  const GridSpec& g = f.spec;
  const int n = g.dim(), s = g.rate();
  for (int d = 0; d < n; ++d)
    for (double e : {region.lo[d], region.hi[d]})
      if (std::abs(e * s - std::round(e * s)) > 1e-9)
        throw std::invalid_argument("lp_norm: region edge is not a multiple of the grid step");
  std::vector<double> v;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const IntVec idx = g.unflat(i);
    bool in = true;
    for (int d = 0; d < n; ++d) {
      const long long j = g.centered(idx[d]);
      // x = j/s in (lo, hi]  <=>  lo*s < j <= hi*s
      in = in && j > std::llround(region.lo[d] * s) && j <= std::llround(region.hi[d] * s);
    }
    if (in) v.push_back(std::abs(f[i]));
  }
  return weighted_power_norm(v, p, std::pow(g.step(), n));
}

int cube_index(const GridSpec& g, int storage_index) {
  const int j = g.centered(storage_index);
  const int s = g.rate();
  // k = ceil(j/s - 1/2) = ceil((2j - s) / (2s))
  const int num = 2 * j - s, den = 2 * s;
  int k = num >= 0 ? (num + den - 1) / den : -((-num) / den);
  if (k == -g.box() / 2) k = g.box() / 2;
  return k;
}

std::vector<std::pair<IntVec, double>> cube_norms(const GridFunction& f, double p) {
  require_space(f, "cube_norms");
  check_exponent(p);
  const GridSpec& g = f.spec;
  const int n = g.dim();
  std::map<IntVec, std::vector<double>> cubes;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const IntVec idx = g.unflat(i);
    const IntVec k{cube_index(g, idx[0]), n == 2 ? cube_index(g, idx[1]) : 0};
    cubes[k].push_back(std::abs(f[i]));
  }
  const double w = std::pow(g.step(), n);
  std::vector<std::pair<IntVec, double>> out;
  out.reserve(cubes.size());
  for (const auto& [k, v] : cubes) out.emplace_back(k, weighted_power_norm(v, p, w));
  return out;
}

double amalgam_norm(const GridFunction& f, double p, double q) {
  check_exponent(q);
  const auto cn = cube_norms(f, p);
  std::vector<double> v;
  v.reserve(cn.size());
  for (const auto& [k, x] : cn) v.push_back(x);
  return lq_seq_norm(v, q);
}

AmalgamReport amalgam_report(const GridFunction& f, double p, double q, double tail_budget) {
  AmalgamReport r;
  r.value = amalgam_norm(f, p, q);
  r.tail = boundary_mass_fraction(f, 1.0);
  r.tail_ok = r.tail <= tail_budget;
  return r;
}

double boundary_mass_fraction(const GridFunction& f, double width) {
  const GridSpec& g = f.spec;
  const double edge = g.box() / 2.0 - width;
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const double e = std::norm(f[i]);
    total += e;
    const auto c = f.coord(i);
    bool out = false;
    for (int d = 0; d < g.dim(); ++d) out = out || std::abs(c[d]) >= edge;
    if (out) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

std::vector<std::pair<IntVec, GridFunction>> wiener_bands(const GridFunction& f, const Window& kappa,
                                                          std::span<const double> offset) {
  require_space(f, "wiener_bands");
  const GridSpec& g = f.spec;
  const int n = g.dim();
  if (kappa.dim() != n) throw std::invalid_argument("wiener_bands: window dimension mismatch");
  const double half = g.rate() / 2.0, r = kappa.outer();
  std::array<double, 2> off{};
  for (int d = 0; d < n && !offset.empty(); ++d) off[d] = offset[d];

  // Margin: fhat must vanish within r of the frequency box edge.
  auto F = dft(f);
  // Round-off puts ~1e-16 relative noise on every frequency; for q < 1 it
  // would feed every band, so it is cut before banding.
  const double floor = 1e-13 * F.max_abs();
  for (auto& v : F.samples)
    if (std::abs(v) <= floor) v = 0.0;
  double total = 0.0, near_edge = 0.0;
  for (std::size_t q = 0; q < F.samples.size(); ++q) {
    const double e = std::norm(F[q]);
    total += e;
    const auto c = F.coord(q);
    for (int d = 0; d < n; ++d)
      if (c[d] < -half + r || c[d] > half - r - g.freq_step()) {
        near_edge += e;
        break;
      }
  }
  if (total > 0.0 && near_edge / total > 1e-20)
    throw std::invalid_argument("wiener_norm: fhat reaches within the window radius of the frequency box edge");

  // Bands whose window support (k + off - r, k + off + r) meets the box.
  IntVec lo{}, hi{};
  for (int d = 0; d < n; ++d) {
    lo[d] = static_cast<int>(std::floor(-half - off[d] - r)) + 1;
    hi[d] = static_cast<int>(std::ceil(half - off[d] + r)) - 1;
  }
  const auto ks = lattice_box(n, lo, hi);
  std::vector<std::optional<GridFunction>> slots(ks.size());
  parallel_for(ks.size(), [&](std::size_t b) {
    std::array<double, 2> shift{};
    for (int d = 0; d < n; ++d) shift[d] = ks[b][d] + off[d];
    auto G = F;
    bool any = false;
    for (std::size_t q = 0; q < G.samples.size(); ++q) {
      if (G[q] == 0.0) continue;
      const auto c = G.coord(q);
      const double w = kappa.eval_shifted(std::span<const double>(c.data(), n), std::span<const double>(shift.data(), n));
      G[q] *= w;
      any = any || w != 0.0;
    }
    if (any) slots[b] = idft(G);
  });
  std::vector<std::pair<IntVec, GridFunction>> out;
  for (std::size_t b = 0; b < ks.size(); ++b)
    if (slots[b]) out.emplace_back(ks[b], std::move(*slots[b]));
  return out;
}

double wiener_norm(const GridFunction& f, double p, double q, const Window& kappa, std::span<const double> offset) {
  check_exponent(p);
  check_exponent(q);
  const auto bands = wiener_bands(f, kappa, offset);
  const std::size_t S = f.samples.size();
  std::vector<double> pointwise(S, 0.0), col(bands.size());
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t b = 0; b < bands.size(); ++b) col[b] = std::abs(bands[b].second[i]);
    pointwise[i] = lq_seq_norm(col, q);
  }
  return weighted_power_norm(pointwise, p, std::pow(f.spec.step(), f.spec.dim()));
}

std::pair<double, double> mixed_norm_check(const std::vector<std::vector<double>>& F, double p, double q) {
  check_exponent(p);
  check_exponent(q);
  if (p > q) throw std::invalid_argument("mixed_norm_check: requires p <= q");
  const std::size_t nx = F.size(), ny = nx ? F[0].size() : 0;
  std::vector<double> tmp;
  std::vector<double> inner_y(ny), inner_x(nx);
  for (std::size_t y = 0; y < ny; ++y) {
    tmp.clear();
    for (std::size_t x = 0; x < nx; ++x) tmp.push_back(F[x][y]);
    inner_y[y] = weighted_power_norm(tmp, p);
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (F[x].size() != ny) throw std::invalid_argument("mixed_norm_check: ragged array");
    inner_x[x] = weighted_power_norm(F[x], q);
  }
  return {weighted_power_norm(inner_y, q), weighted_power_norm(inner_x, p)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw std::invalid_argument("fit_line: needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    res += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - res / syy : std::nan("");
  f.r2_floored = 1.0 - res / std::max(syy, 1e-4 * static_cast<double>(n));
  return f;
}

LineFit bernstein_scaling_check(const GridFunction& f, double r, double s, std::span<const int> dilations) {
  check_exponent(r);
  check_exponent(s);
  if (r > s) throw std::invalid_argument("bernstein_scaling_check: requires r <= s");
  if (dilations.size() < 3) throw std::invalid_argument("bernstein_scaling_check: needs at least 3 dilations");
  require_space(f, "bernstein_scaling_check");
  const GridSpec& g = f.spec;
  const int n = g.dim();
  std::vector<double> lx, ly;
  for (int lam : dilations) {
    if (lam < 1) throw std::invalid_argument("bernstein_scaling_check: dilations must be positive integers");
    auto fl = GridFunction::zeros(g, Side::space);
    for (std::size_t i = 0; i < fl.samples.size(); ++i) {
      const IntVec idx = g.unflat(i);
      IntVec src{};
      bool in = true;
      for (int d = 0; d < n; ++d) {
        const int j = g.centered(idx[d]) * lam;
        in = in && g.in_range(j);
        src[d] = g.wrap(j);
      }
      if (in) fl[i] = f[g.flat(src)];
    }
    lx.push_back(std::log(static_cast<double>(lam)));
    ly.push_back(std::log(lp_norm(fl, s) / lp_norm(fl, r)));
  }
  return fit_line(lx, ly);
}

}  // namespace latbump

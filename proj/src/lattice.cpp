#include "latbump/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace latbump {

int sup_norm(const IntVec& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

cplx Sequence::at(const IntVec& mu) const {
  auto it = entries.find(mu);
  return it == entries.end() ? cplx{} : it->second;
}

std::vector<IntVec> Sequence::support() const {
  std::vector<IntVec> out;
  for (const auto& [mu, v] : entries)
    if (v != cplx{}) out.push_back(mu);
  return out;
}

cplx TrigPolynomial::eval(std::span<const double> x) const {
  cplx acc{};
  for (const auto& [mu, c] : coeffs) {
    double phase = 0.0;
    for (int i = 0; i < n; ++i) phase += mu[i] * x[i];
    // Reduce the phase to [0, 1) before scaling so large modes keep precision.
    phase -= std::floor(phase);
    acc += c * std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return acc;
}

cplx LatticeCoefficients::at(const IntVec& mu1, const IntVec& mu2) const {
  auto it = entries.find({mu1, mu2});
  return it == entries.end() ? cplx{} : it->second;
}

double LatticeCoefficients::sup_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : entries) m = std::max(m, std::abs(v));
  return m;
}

int LatticeCoefficients::support_radius() const {
  int r = 0;
  for (const auto& [k, v] : entries) r = std::max({r, sup_norm(k.first), sup_norm(k.second)});
  return r;
}

std::vector<IntVec> LatticeCoefficients::projection(int j) const {
  std::set<IntVec> pts;
  for (const auto& [k, v] : entries) pts.insert(j == 0 ? k.first : k.second);
  return {pts.begin(), pts.end()};
}

LatticeCoefficients LatticeCoefficients::delta(int n, const IntVec& mu1, const IntVec& mu2,
                                               cplx value) {
  LatticeCoefficients a;
  a.n = n;
  a.entries[{mu1, mu2}] = value;
  return a;
}

LatticeCoefficients scaled(const LatticeCoefficients& a, cplx c) {
  LatticeCoefficients out = a;
  for (auto& [k, v] : out.entries) v *= c;
  return out;
}

std::vector<IntVec> lattice_box(int n, const IntVec& lo, const IntVec& hi) {
  std::vector<IntVec> out;
  if (n == 1) {
    for (int i = lo[0]; i <= hi[0]; ++i) out.push_back({i, 0});
  } else {
    for (int i = lo[0]; i <= hi[0]; ++i)
      for (int j = lo[1]; j <= hi[1]; ++j) out.push_back({i, j});
  }
  return out;
}

}  // namespace latbump

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latbump/operators.hpp"
#include "latbump/transference.hpp"

using namespace latbump;

namespace {

BumpProfile phi04() { return make_bump(BumpKind::tensor_exp, {0.0, 0.0}, {0.4, 0.4}); }
BumpProfile phi04_offset() { return make_bump(BumpKind::tensor_exp, {0.25, -0.15}, {0.4, 0.4}); }

TrigPolynomial random_trig(int modes, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  TrigPolynomial F;
  for (int k = -(modes / 2); k < modes - modes / 2; ++k) F.coeffs[{k, 0}] = {nd(rng), nd(rng)};
  return F;
}

Sequence random_seq(int count, unsigned seed, int radius = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-radius, radius);
  std::normal_distribution<double> nd;
  Sequence s;
  while (static_cast<int>(s.entries.size()) < count) s.entries[{pick(rng), 0}] = {nd(rng), nd(rng)};
  return s;
}

SearchParams quick() {
  SearchParams p;
  p.starts = 8;
  p.steps = 60;
  return p;
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

GridFunction restrict_Q(GridFunction f) {
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto x = f.coord(i);
    for (int d = 0; d < f.spec.dim(); ++d)
      if (!(x[d] > -0.5 && x[d] <= 0.5)) f[i] = 0.0;
  }
  return f;
}

}  // namespace

TEST(Hypothesis, AmalgamAndWienerConditions) {
  ExponentTuple e;
  e.q1 = 2, e.q2 = 2, e.q = 1;
  EXPECT_TRUE(exponent_hypothesis_holds(e, SpaceKind::amalgam));
  e.q = 0.5;
  EXPECT_FALSE(exponent_hypothesis_holds(e, SpaceKind::amalgam));
  try {
    require_exponent_hypothesis(e, SpaceKind::amalgam);
    FAIL() << "expected a hypothesis error";
  } catch (const HypothesisError& err) {
    EXPECT_NE(std::string(err.what()).find("amalgam necessity lemma"), std::string::npos);
    EXPECT_NE(std::string(err.what()).find("holds only when 1/q <= 1/q1 + 1/q2"), std::string::npos);
  }
  ExponentTuple w;
  w.p1 = kInf, w.p2 = kInf, w.p = 1;
  EXPECT_FALSE(exponent_hypothesis_holds(w, SpaceKind::wiener));
  EXPECT_THROW(require_exponent_hypothesis(w, SpaceKind::wiener), HypothesisError);
  EXPECT_TRUE(exponent_hypothesis_holds(w, SpaceKind::amalgam));
}

TEST(AmalgamWitness, ConstantsGiveThetaInverse) {
  const auto g = make_grid(1, 8, 32);
  const auto tp = default_theta_pair(phi04(), g);
  TrigPolynomial one{1, {{IntVec{0, 0}, 1.0}}};
  const auto w = build_amalgam_witness(one, one, tp);
  EXPECT_EQ(max_diff(w.f1, w.theta_inv1), 0.0);
  EXPECT_EQ(max_diff(w.f2, w.theta_inv2), 0.0);
  EXPECT_GE(w.m, 1.0);
  // theta_inv_j is the inverse transform of the theta samples
  const auto th = idft(GridFunction::sample(g, Side::frequency, [&](std::span<const double> xi) {
    return bump_eval(tp.theta2, xi);
  }));
  EXPECT_LE(max_diff(th, w.theta_inv2), 1e-15);
}

TEST(AmalgamWitness, FrequencySupportMask) {
  for (const auto& phi : {phi04(), phi04_offset()}) {
    const auto g = make_grid(1, 8, 32);
    const auto tp = default_theta_pair(phi, g);
    const auto F1 = random_trig(3, 1), F2 = random_trig(4, 2);
    const auto w = build_amalgam_witness(F1, F2, tp);
    for (int j = 0; j < 2; ++j) {
      const auto& F = j == 0 ? F1 : F2;
      const auto& th = j == 0 ? tp.theta1 : tp.theta2;
      const auto fh = dft(j == 0 ? w.f1 : w.f2);
      double total = 0.0, outside = 0.0;
      for (std::size_t q = 0; q < fh.samples.size(); ++q) {
        const double xi = fh.coord(q)[0];
        bool in = false;
        for (const auto& [nu, c] : F.coeffs) in = in || std::abs(xi - nu[0] - th.center[0]) < th.radius[0];
        total += std::norm(fh[q]);
        if (!in) outside += std::norm(fh[q]);
      }
      EXPECT_LE(outside / total, 1e-10);
    }
    // f_j = F_j * inverse transform of theta_j, pointwise on the grid
    for (std::size_t i = 0; i < w.f1.samples.size(); ++i) {
      const double x = w.f1.coord(i)[0];
      const cplx expect = F1.eval(std::span<const double>(&x, 1)) * w.theta_inv1[i];
      EXPECT_LE(std::abs(w.f1[i] - expect), 1e-12);
    }
  }
}

TEST(AmalgamWitness, NormConstantReported) {
  const auto g = make_grid(1, 8, 32);
  const auto tp = default_theta_pair(phi04(), g);
  double c = 0.0;
  for (unsigned seed = 0; seed < 8; ++seed) {
    const auto F = random_trig(3, 10 + seed);
    const auto w = build_amalgam_witness(F, F, tp);
    c = std::max(c, amalgam_norm(w.f1, 2.0, 2.0) / torus_norm(F, 2.0));
  }
  RecordProperty("amalgam_witness_constant", std::to_string(c));
  EXPECT_TRUE(std::isfinite(c) && c > 0.0);
}

TEST(AmalgamWitness, RejectsWideTheta) {
  const auto g = make_grid(1, 8, 32);
  auto tp = default_theta_pair(phi04(), g);
  tp.radius = 0.5;
  TrigPolynomial one{1, {{IntVec{0, 0}, 1.0}}};
  EXPECT_THROW(build_amalgam_witness(one, one, tp), std::invalid_argument);
  TrigPolynomial far{1, {{IntVec{16, 0}, 1.0}}};
  EXPECT_THROW(build_amalgam_witness(far, one, default_theta_pair(phi04(), g)), std::invalid_argument);
}

TEST(AmalgamFactorization, DeltaCollapsesToG) {
  const auto g = make_grid(1, 8, 32);
  const auto tp = default_theta_pair(phi04(), g);
  TrigPolynomial one{1, {{IntVec{0, 0}, 1.0}}};
  const auto w = build_amalgam_witness(one, one, tp);
  const auto r = verify_amalgam_factorization(LatticeCoefficients::delta(1), phi04(), w);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_LE(max_diff(r.lhs, tp.g), 1e-8);
}

TEST(AmalgamFactorization, RandomFixtures) {
  for (const auto& phi : {phi04(), phi04_offset()}) {
    const auto g = make_grid(1, 8, 32);
    const auto tp = default_theta_pair(phi, g);
    for (unsigned k = 0; k < 5; ++k) {
      const auto a = random_coefficients(1, 9, 1, 40 + k);
      const auto w = build_amalgam_witness(random_trig(3, 2 * k), random_trig(3, 2 * k + 1), tp);
      const auto r = verify_amalgam_factorization(a, phi, w);
      EXPECT_LE(r.residual, 1e-6);
      EXPECT_TRUE(r.dominance_ok);
      EXPECT_GE(r.dominance_min_ratio, 1.0);
    }
  }
}

TEST(AmalgamFactorization, ResidualAtRoundingLevelForAllRates) {
  // The identity is exact on the torus for every s; what remains is rounding.
  const auto a = random_coefficients(1, 9, 1, 3);
  const auto F1 = random_trig(3, 5), F2 = random_trig(3, 6);
  for (int s : {16, 32, 64}) {
    const auto g = make_grid(1, 8, s);
    const auto w = build_amalgam_witness(F1, F2, default_theta_pair(phi04(), g));
    const auto r = verify_amalgam_factorization(a, phi04(), w);
    RecordProperty("residual_s" + std::to_string(s), std::to_string(r.residual));
    EXPECT_LE(r.residual, 1e-13);
  }
}

TEST(AmalgamFactorization, RequiresConditionB) {
  const auto g = make_grid(1, 8, 32);
  const auto tp = default_theta_pair(phi04(), g);
  TrigPolynomial one{1, {{IntVec{0, 0}, 1.0}}};
  const auto w = build_amalgam_witness(one, one, tp);
  const auto wide = make_bump(BumpKind::tensor_exp, {0.0, 0.0}, {1.0, 1.0});
  EXPECT_THROW(verify_amalgam_factorization(LatticeCoefficients::delta(1), wide, w), std::invalid_argument);
  EXPECT_THROW(default_theta_pair(wide, g), std::invalid_argument);
}

TEST(WienerWitness, DeltaAndNormIdentity) {
  const auto g = make_grid(1, 8, 32);
  const auto kappa = make_window(1, 0.6);
  for (const auto& phi : {phi04(), phi04_offset()}) {
    const auto tp = default_theta_pair(phi, g);
    const Sequence d{1, {{IntVec{0, 0}, 1.0}}};
    const auto w0 = build_wiener_witness(d, d, tp, kappa);
    EXPECT_EQ(max_diff(w0.f1, w0.theta_inv1), 0.0);
    const auto b1 = random_seq(4, 11), b2 = random_seq(4, 12);
    const auto w = build_wiener_witness(b1, b2, tp, kappa);
    const std::vector<double> o1{tp.witness[0]}, o2{tp.witness[1]};
    for (double p : {0.5, 1.0, 2.0, kInf})
      for (double q : {0.5, 1.0, 2.0, kInf}) {
        const double lhs = wiener_norm(w.f1, p, q, kappa, o1);
        const double rhs = lq_seq_norm(b1, q) * lp_norm(w.theta_inv1, p);
        EXPECT_NEAR(lhs, rhs, 1e-6 * rhs) << p << " " << q;
        const double lhs2 = wiener_norm(w.f2, p, q, kappa, o2);
        EXPECT_NEAR(lhs2, lq_seq_norm(b2, q) * lp_norm(w.theta_inv2, p), 1e-6 * lhs2);
      }
  }
}

TEST(WienerWitness, BandProjectionsAreSingleModes) {
  const auto g = make_grid(1, 8, 32);
  const auto kappa = make_window(1, 0.6);
  const auto tp = default_theta_pair(phi04_offset(), g);
  const auto b1 = random_seq(4, 21);
  const auto w = build_wiener_witness(b1, b1, tp, kappa);
  const std::vector<double> o1{tp.witness[0]};
  for (int mu = -3; mu <= 3; ++mu) {
    const auto band = band_project(kappa, {mu, 0}, o1, w.f1);
    double err = 0.0;
    for (std::size_t i = 0; i < band.samples.size(); ++i) {
      const double x = band.coord(i)[0];
      const cplx expect = b1.at({mu, 0}) * std::polar(1.0, 2.0 * std::numbers::pi * mu * x) * w.theta_inv1[i];
      err = std::max(err, std::abs(band[i] - expect));
    }
    EXPECT_LE(err, 1e-8) << mu;
  }
}

TEST(WienerWitness, RejectsNarrowPlateau) {
  const auto g = make_grid(1, 8, 32);
  const auto tp = default_theta_pair(phi04(), g);
  const Sequence d{1, {{IntVec{0, 0}, 1.0}}};
  EXPECT_THROW(build_wiener_witness(d, d, tp, make_window(1, 0.9)), std::invalid_argument);
}

TEST(WienerFactorization, DeltaCase) {
  const auto g = make_grid(1, 8, 32);
  const auto kappa = make_window(1, 0.6);
  const auto tp = default_theta_pair(phi04(), g);
  const Sequence d{1, {{IntVec{0, 0}, 1.0}}};
  const auto w = build_wiener_witness(d, d, tp, kappa);
  const auto r = verify_wiener_factorization(LatticeCoefficients::delta(1), phi04(), w, kappa);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_LE(r.band_residual, 1e-8);
  EXPECT_LE(std::abs(r.recovered.at({0, 0}) - 1.0), 1e-8);
}

TEST(WienerFactorization, RandomFixturesAndBandLowerBound) {
  const auto g = make_grid(1, 8, 32);
  const auto kappa = make_window(1, 0.6);
  for (const auto& phi : {phi04(), phi04_offset()}) {
    const auto tp = default_theta_pair(phi, g);
    const std::vector<double> o{tp.witness[0] + tp.witness[1]};
    for (unsigned k = 0; k < 4; ++k) {
      const auto a = random_coefficients(1, 6, 1, 70 + k);
      const auto b1 = random_seq(3, 80 + k, 1), b2 = random_seq(3, 90 + k, 1);
      const auto w = build_wiener_witness(b1, b2, tp, kappa);
      const auto r = verify_wiener_factorization(a, phi, w, kappa);
      EXPECT_LE(r.residual, 1e-6);
      EXPECT_LE(r.band_residual, 1e-6);
      EXPECT_LE(r.coefficient_error, 1e-6);
      // S_a by direct triple loop
      for (const auto& [mu, v] : r.expected.entries) {
        cplx s = 0.0;
        for (const auto& [m, av] : a.entries)
          if (m.first + m.second == mu) s += av * b1.at(m.first) * b2.at(m.second);
        EXPECT_LE(std::abs(s - v), 1e-12);
      }
      const auto T = apply_T_sigma(synth_sigma(a, phi, g), w.f1, w.f2);
      for (double p : {1.0, 2.0})
        for (double q : {1.0, 2.0}) {
          const double lhs = wiener_norm(T, p, q, kappa, o);
          const double gq = lp_norm(restrict_Q(tp.g), p);
          EXPECT_GE(lhs, lq_seq_norm(r.expected, q) * std::min(1.0, gq) * (1 - 1e-9));
        }
    }
  }
}

TEST(EstimateS, DeltaIsOne) {
  const auto est = estimate_norm_S(LatticeCoefficients::delta(1), 2.0, 2.0, 2.0, quick());
  EXPECT_NEAR(est.value, 1.0, 1e-12);
}

TEST(EstimateS, YoungEqualityAtOne) {
  LatticeCoefficients a;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) a.entries[{{i, 0}, {j, 0}}] = 1.0;
  const auto est = estimate_norm_S(a, 1.0, 1.0, 1.0, quick());
  EXPECT_NEAR(est.value, 1.0, 1e-9);
}

TEST(EstimateS, SupNormMatchesBruteForce) {
  const int m = 3;
  LatticeCoefficients a;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a.entries[{{i, 0}, {j, 0}}] = 1.0;
  // brute force over sign patterns and a small rational grid on supp a projections
  double brute = 0.0;
  const std::vector<double> vals{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<int> idx(2 * m, 0);
  for (;;) {
    Sequence b1{1, {}}, b2{1, {}};
    for (int i = 0; i < m; ++i) {
      b1.entries[{i, 0}] = vals[idx[i]];
      b2.entries[{i, 0}] = vals[idx[m + i]];
    }
    brute = std::max(brute, ratio_S(a, b1, b2, kInf, kInf, kInf));
    int k = 0;
    while (k < 2 * m && ++idx[k] == static_cast<int>(vals.size())) idx[k++] = 0;
    if (k == 2 * m) break;
  }
  EXPECT_NEAR(brute, 3.0, 1e-12);
  EXPECT_NEAR(estimate_norm_S(a, kInf, kInf, kInf, quick()).value, brute, 1e-9);
}

TEST(EstimateS, WitnessReevaluatesAndDeterministic) {
  const auto a = random_coefficients(1, 7, 1, 9);
  for (auto [q1, q2, q] : std::vector<std::array<double, 3>>{{2, 2, 2}, {1, 2, 0.5}, {kInf, 1, 1}}) {
    const auto e1 = estimate_norm_S(a, q1, q2, q, quick());
    const auto e2 = estimate_norm_S(a, q1, q2, q, quick());
    EXPECT_EQ(e1.value, e2.value);
    EXPECT_EQ(e1.w1.entries, e2.w1.entries);
    EXPECT_NEAR(ratio_S(a, e1.w1, e1.w2, q1, q2, q), e1.value, 1e-10 * e1.value);
    EXPECT_EQ(e1.trace.start_best.size(), 8u);
    EXPECT_FALSE(e1.trace.history.empty());
  }
}

TEST(EstimateS, ScaleCovariance) {
  const auto a = random_coefficients(1, 6, 1, 13);
  const cplx c(0.0, -2.5);
  const auto e1 = estimate_norm_S(a, 2.0, 1.0, 1.0, quick());
  const auto e2 = estimate_norm_S(scaled(a, c), 2.0, 1.0, 1.0, quick());
  EXPECT_NEAR(e2.value, 2.5 * e1.value, 1e-9 * e2.value);
  EXPECT_NEAR(ratio_S(scaled(a, c), e1.w1, e1.w2, 2.0, 1.0, 1.0), 2.5 * e1.value, 1e-12 * e2.value);
}

TEST(EstimateS, EmptyRejected) {
  EXPECT_THROW(estimate_norm_S(LatticeCoefficients{}, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(estimate_norm_T_period(LatticeCoefficients{}, 1, 1, 1), std::invalid_argument);
}

TEST(TorusNorm, ParsevalAtTwo) {
  const auto F = random_trig(5, 3);
  double l2 = 0.0;
  for (const auto& [k, c] : F.coeffs) l2 += std::norm(c);
  EXPECT_NEAR(torus_norm(F, 2.0), std::sqrt(l2), 1e-13 * std::sqrt(l2));
  TrigPolynomial one{1, {{IntVec{0, 0}, cplx(0, 3)}}};
  for (double p : {0.5, 1.0, kInf}) EXPECT_NEAR(torus_norm(one, p), 3.0, 1e-13);
}

TEST(EstimateTPeriod, DeltaIsOne) {
  for (auto [p1, p2, p] : std::vector<std::array<double, 3>>{{2, 2, 2}, {1, 1, 1}, {2, kInf, 0.5}}) {
    const auto est = estimate_norm_T_period(LatticeCoefficients::delta(1), p1, p2, p, quick());
    EXPECT_NEAR(est.value, 1.0, 1e-9) << p1 << " " << p2 << " " << p;
  }
}

TEST(EstimateTPeriod, HolderCeiling) {
  LatticeCoefficients a;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) a.entries[{{i, 0}, {j, 0}}] = 1.0;
  const auto est = estimate_norm_T_period(a, 2.0, 2.0, 1.0, quick());
  EXPECT_GE(est.value, 1.0 - 1e-9);
  EXPECT_LE(est.value, 1.0 + 1e-6);
}

TEST(EstimateTPeriod, ParsevalCrossCheckAndReevaluation) {
  const auto a = random_coefficients(1, 6, 1, 31);
  const auto est = estimate_norm_T_period(a, 2.0, 2.0, 2.0, quick());
  // at p = 2 the torus ratio equals the coefficient-space ratio
  EXPECT_NEAR(ratio_S(a, est.w1, est.w2, 2.0, 2.0, 2.0), est.value, 1e-12 * est.value);
  EXPECT_NEAR(ratio_T_period(a, TrigPolynomial::from_sequence(est.w1), TrigPolynomial::from_sequence(est.w2), 2, 2, 2),
              est.value, 1e-10 * est.value);
}

TEST(EstimateTPeriod, ReproducibleAcrossSeeds) {
  const auto a = random_coefficients(1, 5, 1, 77);
  double lo = kInf, hi = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SearchParams p;
    p.seed = seed;
    const double v = estimate_norm_T_period(a, 2.0, 2.0, 1.0, p).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LE(hi / lo, 1.02);
}

TEST(EstimateTaPhi, ZeroCoefficients) {
  const auto setup = make_continuum_setup(phi04(), make_grid(1, 8, 16));
  LatticeCoefficients zero;
  zero.entries[{{0, 0}, {0, 0}}] = 0.0;
  EXPECT_EQ(estimate_norm_T_aPhi(zero, phi04(), ExponentTuple{}, SpaceKind::amalgam, setup, quick()).value, 0.0);
}

TEST(EstimateTaPhi, AmalgamWitnessChain) {
  const auto g = make_grid(1, 8, 16);
  const auto setup = make_continuum_setup(phi04(), g);
  ExponentTuple e;
  e.p1 = 2, e.p2 = 2, e.p = 1, e.q1 = 2, e.q2 = 2, e.q = 1;
  for (unsigned k = 0; k < 3; ++k) {
    const auto a = random_coefficients(1, 4, 1, 50 + k);
    const auto model = estimate_norm_T_period(a, e.p1, e.p2, e.p, quick());
    const auto est = estimate_norm_T_aPhi(a, phi04(), e, SpaceKind::amalgam, setup, quick(), &model);
    const auto w = build_amalgam_witness(TrigPolynomial::from_sequence(model.w1), TrigPolynomial::from_sequence(model.w2),
                                         setup.theta);
    const auto sigma = synth_sigma(a, phi04(), g);
    const double witness_ratio = ratio_T_sigma(sigma, w.f1, w.f2, e, SpaceKind::amalgam, setup.kappa, setup.theta.witness);
    EXPECT_GE(est.value, witness_ratio);
    // numerator chain on Q: ||T(f1,f2)||_{(L^p,l^q)} >= ||1_Q T|| >= ||1_Q T^period||
    const auto f = verify_amalgam_factorization(a, phi04(), w);
    const double num = amalgam_norm(f.lhs, e.p, e.q);
    EXPECT_GE(num, lp_norm(restrict_Q(f.lhs), e.p) * (1 - 1e-12));
    EXPECT_GE(lp_norm(restrict_Q(f.lhs), e.p), lp_norm(restrict_Q(f.periodic), e.p) * (1 - 1e-8));
    // normalized chain with c_j = ||f_j|| / ||F_j||_{L^p(T)}
    const double c1 = amalgam_norm(w.f1, e.p1, e.q1) / torus_norm(TrigPolynomial::from_sequence(model.w1), e.p1);
    const double c2 = amalgam_norm(w.f2, e.p2, e.q2) / torus_norm(TrigPolynomial::from_sequence(model.w2), e.p2);
    const double period_on_grid =
        lp_norm(restrict_Q(f.periodic), e.p) /
        (torus_norm(TrigPolynomial::from_sequence(model.w1), e.p1) * torus_norm(TrigPolynomial::from_sequence(model.w2), e.p2));
    EXPECT_GE(witness_ratio * c1 * c2, period_on_grid * (1 - 1e-8));
  }
}

TEST(EstimateTaPhi, WienerWitnessChainIsExact) {
  const auto g = make_grid(1, 8, 16);
  for (const auto& phi : {phi04(), phi04_offset()}) {
    const auto setup = make_continuum_setup(phi, g);
    ExponentTuple e;
    e.p1 = 2, e.p2 = 2, e.p = 1, e.q1 = 1, e.q2 = 1, e.q = 1;
    const auto a = random_coefficients(1, 5, 1, 61);
    const auto model = estimate_norm_S(a, e.q1, e.q2, e.q, quick());
    const auto w = build_wiener_witness(model.w1, model.w2, setup.theta, setup.kappa);
    const double cW = lp_norm(setup.theta.g, e.p) / (lp_norm(w.theta_inv1, e.p1) * lp_norm(w.theta_inv2, e.p2));
    const auto sigma = synth_sigma(a, phi, g);
    const double witness_ratio = ratio_T_sigma(sigma, w.f1, w.f2, e, SpaceKind::wiener, setup.kappa, setup.theta.witness);
    EXPECT_NEAR(witness_ratio, cW * model.value, 1e-8 * witness_ratio);
    const auto est = estimate_norm_T_aPhi(a, phi, e, SpaceKind::wiener, setup, quick(), &model);
    EXPECT_GE(est.value, cW * model.value * (1 - 1e-8));
  }
}

TEST(TransferenceReport, SingleDeltaHasUnitSpread) {
  const auto setup = make_continuum_setup(phi04(), make_grid(1, 8, 16));
  const auto rep = transference_report({LatticeCoefficients::delta(1)}, phi04(), ExponentTuple{}, SpaceKind::amalgam,
                                       setup, quick());
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_EQ(rep.spread, 1.0);
  EXPECT_TRUE(rep.stable);
}

TEST(TransferenceReport, SmallFamilyBothSpaces) {
  const auto setup = make_continuum_setup(phi04(), make_grid(1, 8, 16));
  std::vector<LatticeCoefficients> fam;
  for (int i = 0; i < 4; ++i) fam.push_back(random_coefficients(1, 2 + 2 * i, 1, 500 + i));
  for (auto space : {SpaceKind::amalgam, SpaceKind::wiener}) {
    const auto rep = transference_report(fam, phi04(), ExponentTuple{}, space, setup, quick());
    EXPECT_TRUE(rep.ratios_finite);
    EXPECT_LE(rep.spread, 10.0);
    for (const auto& r : rep.rows) EXPECT_GT(r.ratio, 0.0);
  }
}

TEST(TransferenceReport, RejectsViolatedHypotheses) {
  const auto setup = make_continuum_setup(phi04(), make_grid(1, 8, 16));
  ExponentTuple e;
  e.q1 = 2, e.q2 = 2, e.q = 0.5;
  EXPECT_THROW(transference_report({LatticeCoefficients::delta(1)}, phi04(), e, SpaceKind::amalgam, setup, quick()),
               HypothesisError);
  ExponentTuple w;
  w.p1 = kInf, w.p2 = kInf, w.p = 1;
  EXPECT_THROW(transference_report({LatticeCoefficients::delta(1)}, phi04(), w, SpaceKind::wiener, setup, quick()),
               HypothesisError);
}

TEST(RandomCoefficients, SupportAndDeterminism) {
  const auto a = random_coefficients(1, 9, 1, 4);
  EXPECT_EQ(a.entries.size(), 9u);
  EXPECT_LE(a.support_radius(), 1);
  EXPECT_EQ(random_coefficients(1, 9, 1, 4).entries, a.entries);
  EXPECT_THROW(random_coefficients(1, 10, 1, 4), std::invalid_argument);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "latbump/lattice.hpp"

using namespace latbump;

TEST(Lattice, SupNorm) {
  EXPECT_EQ(sup_norm({3, -5}), 5);
  EXPECT_EQ(sup_norm({0, 0}), 0);
}

TEST(Lattice, BoxEnumeratesAllPoints) {
  EXPECT_EQ(lattice_box(1, {-2, 0}, {2, 0}).size(), 5u);
  const auto pts = lattice_box(2, {-1, -1}, {1, 2});
  EXPECT_EQ(pts.size(), 12u);
  EXPECT_EQ(pts.front(), (IntVec{-1, -1}));
  EXPECT_EQ(pts.back(), (IntVec{1, 2}));
}

TEST(Lattice, CoefficientQueries) {
  LatticeCoefficients a;
  a.n = 1;
  a.entries[{{0, 0}, {1, 0}}] = 2.0;
  a.entries[{{-3, 0}, {1, 0}}] = cplx(0, -4);
  EXPECT_EQ(a.at({0, 0}, {1, 0}), cplx(2.0));
  EXPECT_EQ(a.at({5, 0}, {1, 0}), cplx(0.0));
  EXPECT_DOUBLE_EQ(a.sup_abs(), 4.0);
  EXPECT_EQ(a.support_radius(), 3);
  EXPECT_EQ(a.projection(0).size(), 2u);
  EXPECT_EQ(a.projection(1).size(), 1u);
  const auto b = scaled(a, cplx(0, 1));
  EXPECT_EQ(b.at({0, 0}, {1, 0}), cplx(0, 2));
}

TEST(Lattice, TrigPolynomialEval) {
  TrigPolynomial F{1, {{{1, 0}, 1.0}, {{-1, 0}, 1.0}}};
  for (double x : {0.0, 0.1, 0.37, -0.25}) {
    const double xs[1] = {x};
    EXPECT_NEAR(std::abs(F.eval(xs) - 2.0 * std::cos(2 * std::numbers::pi * x)), 0.0, 1e-14);
  }
  TrigPolynomial G{2, {{{1, -2}, cplx(0.5, 0.5)}}};
  const double p[2] = {0.3, 0.7};
  const cplx want = cplx(0.5, 0.5) * std::polar(1.0, 2 * std::numbers::pi * (0.3 - 1.4));
  EXPECT_NEAR(std::abs(G.eval(p) - want), 0.0, 1e-14);
}

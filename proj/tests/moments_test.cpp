#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "torusfit/moments.hpp"

using namespace torusfit;
using testsupport::Draw;

namespace {

std::vector<double> as_vector(const TrigMoments& m) {
  return {m.e_cos1,     m.e_cos2,     m.e_sin1,     m.e_sin2,     m.e_cos1cos1, m.e_cos2cos2, m.e_sin1sin1,
          m.e_sin2sin2, m.e_cos1cos2, m.e_cos1sin2, m.e_sin1cos2, m.e_sin1sin2, m.e_cos1sin1, m.e_cos2sin2};
}

double max_gap(const TrigMoments& a, const TrigMoments& b) {
  const auto x = as_vector(a), y = as_vector(b);
  double g = 0;
  for (std::size_t i = 0; i < x.size(); ++i) g = std::max(g, std::abs(x[i] - y[i]));
  return g;
}

std::vector<double> grid21(double lo, double hi) {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(lo + (hi - lo) * i / 20.0);
  return g;
}

}  // namespace

TEST(Moments, TrigClosure) {
  Draw d(21);
  for (int i = 0; i < 100; ++i) {
    const TrigMoments m = trig_moments_brute(d.bgwg(1, 16));
    EXPECT_NEAR(m.e_cos1cos1 + m.e_sin1sin1, 1.0, 1e-12);
    EXPECT_NEAR(m.e_cos2cos2 + m.e_sin2sin2, 1.0, 1e-12);
    for (double v : as_vector(m)) EXPECT_LE(std::abs(v), 1.0 + 1e-12);
  }
}

TEST(Moments, SymmetricMarginalsHaveNoSine) {
  const TrigMoments m = trig_moments_brute(BwgParams{TorusGrid(5, 6), 0, 0, 0.2, 0.3, 0.0, Delta::positive});
  EXPECT_NEAR(m.e_sin1, 0.0, 1e-15);
  EXPECT_NEAR(m.e_sin2, 0.0, 1e-15);
  const double nearly = 1 - 1e-10;
  const TrigMoments u = trig_moments_brute(BwgParams{TorusGrid(5, 6), 1, 2, nearly, nearly, 0.0, Delta::positive});
  EXPECT_NEAR(u.e_cos1, 0.0, 1e-8);
  EXPECT_NEAR(u.e_sin2, 0.0, 1e-8);
}

TEST(Moments, ClosedFormsMatchSummation) {
  Draw d(22);
  for (int i = 0; i < 250; ++i) {
    const BgwgParams p = d.bgwg(3, 16);
    EXPECT_LE(max_gap(trig_moments_closed(p), trig_moments_brute(p)), 1e-10) << i;
  }
  for (int i = 0; i < 100; ++i) {
    const BwgParams p = d.bwg(3, 16);
    EXPECT_LE(max_gap(trig_moments_closed(p), trig_moments_brute(p)), 1e-10) << i;
  }
  const BwgParams spec{TorusGrid(5, 6), 0, 0, 0.2, 0.3, 0.7, Delta::positive};
  EXPECT_LE(max_gap(trig_moments_closed(spec), trig_moments_brute(spec)), 1e-12);
}

TEST(Moments, SineVariantOfSecondAuxiliaryIsWrong) {
  const BgwgParams p{TorusGrid(6, 7), 1.3, 2.6, 0.4, 0.5, 0.6, Delta::positive};
  EXPECT_GT(max_gap(trig_moments_closed(p, true), trig_moments_brute(p)), 1e-4);
  const MomentAuxiliaries aux = moment_auxiliaries(p);
  EXPECT_TRUE((aux.A > 0).all());
  EXPECT_TRUE((aux.B > 0).all());
}

TEST(Moments, CrossMomentsFactorAtZeroRho) {
  Draw d(23);
  for (int i = 0; i < 50; ++i) {
    BgwgParams p = d.bgwg(3, 16);
    p.rho = 0;
    const TrigMoments m = trig_moments_closed(p);
    EXPECT_NEAR(m.e_cos1cos2, m.e_cos1 * m.e_cos2, 1e-12);
    EXPECT_NEAR(m.e_sin1sin2, m.e_sin1 * m.e_sin2, 1e-12);
    EXPECT_NEAR(jupp_mardia_rho1sq(p), 0.0, 1e-12);
    EXPECT_NEAR(jupp_mardia_rho1sq(p, MomentEngine::closed), 0.0, 1e-12);
  }
}

TEST(Moments, VarCovClosedForms) {
  Draw d(24);
  for (int i = 0; i < 150; ++i) {
    BwgParams p = d.bwg(3, 16);
    p.alpha = p.beta = 0;
    p.delta = Delta::positive;
    const BwgVarCov v = bwg_varcov_closed(p);
    const TrigMoments m = trig_moments_brute(p);
    EXPECT_NEAR(v.var_cos1, m.e_cos1cos1 - m.e_cos1 * m.e_cos1, 1e-9);
    EXPECT_NEAR(v.var_sin1, m.e_sin1sin1 - m.e_sin1 * m.e_sin1, 1e-9);
    EXPECT_NEAR(v.var_cos2, m.e_cos2cos2 - m.e_cos2 * m.e_cos2, 1e-9);
    EXPECT_NEAR(v.var_sin2, m.e_sin2sin2 - m.e_sin2 * m.e_sin2, 1e-9);
    EXPECT_NEAR(v.cov_cos1cos2, m.e_cos1cos2 - m.e_cos1 * m.e_cos2, 1e-9);
    EXPECT_NEAR(v.cov_sin1sin2, m.e_sin1sin2 - m.e_sin1 * m.e_sin2, 1e-9);
    EXPECT_GE(v.var_sin1, 0.0);
    EXPECT_GE(v.var_cos2, 0.0);
  }
  const BwgVarCov z = bwg_varcov_closed({TorusGrid(5, 6), 0, 0, 0.3, 0.6, 0.0, Delta::positive});
  EXPECT_NEAR(z.cov_cos1cos2, 0.0, 1e-15);
  EXPECT_NEAR(z.cov_sin1sin2, 0.0, 1e-15);
  EXPECT_GT(bwg_varcov_closed({TorusGrid(4, 4), 0, 0, 0.5, 0.5, 0.5, Delta::positive}).var_sin1, 0.0);
  EXPECT_THROW(bwg_varcov_closed({TorusGrid(4, 4), 1, 0, 0.5, 0.5, 0.5, Delta::positive}), DomainError);
}

TEST(Moments, GeneralFormulaReducesAtOrigin) {
  Draw d(25);
  for (int i = 0; i < 100; ++i) {
    BwgParams p = d.bwg(3, 16);
    p.alpha = p.beta = 0;
    p.delta = Delta::positive;
    const CorrelationComponents c = correlation_components(trig_moments_brute(p));
    EXPECT_NEAR(c.rho1sq, c.rho1cc * c.rho1cc + c.rho1ss * c.rho1ss, 1e-10);
  }
}

TEST(Moments, GeneralFormulaEqualsTrace) {
  Draw d(26);
  for (int i = 0; i < 100; ++i) {
    const TrigMoments m = trig_moments_brute(d.bgwg(3, 16));
    const CorrelationComponents c = correlation_components(m);
    EXPECT_NEAR(c.rho1sq, rho1sq_trace(m), 1e-10);
    EXPECT_GE(c.rho1sq, -1e-15);
    for (double r : {c.rho1cc, c.rho1cs, c.rho1sc, c.rho1ss, c.rho1p, c.rho2p}) EXPECT_LE(std::abs(r), 1.0 + 1e-12);
  }
}

TEST(Moments, ReflectionKeepsCorrelation) {
  Draw d(27);
  for (int i = 0; i < 100; ++i) {
    BwgParams p = d.bwg(3, 16);
    p.alpha = p.beta = 0;
    p.delta = Delta::positive;
    BwgParams n = p;
    n.delta = Delta::negative;
    EXPECT_NEAR(jupp_mardia_rho1sq(p), jupp_mardia_rho1sq(n), 1e-12);
  }
}

TEST(Moments, RotationKeepsCorrelation) {
  Draw d(28);
  for (int i = 0; i < 100; ++i) {
    const BgwgParams p = d.bgwg(3, 16);
    BgwgParams r = p;
    r.alpha = std::fmod(p.alpha + d.integer(1, 5), p.grid.m1);
    r.beta = std::fmod(p.beta + d.integer(1, 5), p.grid.m2);
    EXPECT_NEAR(jupp_mardia_rho1sq(p), jupp_mardia_rho1sq(r), 1e-12);
  }
}

TEST(Moments, DegenerateMarginalsAreRejected) {
  EXPECT_THROW(jupp_mardia_rho1sq(BwgParams{TorusGrid(5, 6), 0, 0, 0.0, 0.3, 0.5, Delta::positive}), DomainError);
  // on a two-point axis sin X is identically zero
  EXPECT_THROW(jupp_mardia_rho1sq(BwgParams{TorusGrid(2, 6), 0, 0, 0.4, 0.3, 0.5, Delta::positive}),
               SingularityError);
}

TEST(Moments, MonotoneInRhoWorkedCase) {
  const BwgParams base{TorusGrid(5, 6), 0, 0, 0.2, 0.3, 0.0, Delta::positive};
  std::vector<double> up, down;
  for (int i = 0; i <= 10; ++i) {
    up.push_back(i / 10.0);
    down.push_back(-1.0 + i / 10.0);
  }
  const auto a = monotonicity_probe(base, up);
  EXPECT_TRUE(a.nondecreasing_nonnegative);
  EXPECT_GT(a.rho1sq.back(), a.rho1sq.front());
  const auto b = monotonicity_probe(base, down);
  EXPECT_TRUE(b.nonincreasing_negative);
  const std::vector<double> zero{0.0};
  const auto c = monotonicity_probe(base, zero);
  ASSERT_EQ(c.rho1sq.size(), 1u);
  EXPECT_NEAR(c.rho1sq[0], 0.0, 1e-12);
}

TEST(Moments, MonotoneInRhoRandomSweep) {
  Draw d(29);
  const auto g = grid21(-1, 1);
  for (int i = 0; i < 60; ++i) {
    const auto r = monotonicity_probe(d.bgwg(3, 16), g);
    EXPECT_TRUE(r.monotone()) << i;
  }
}

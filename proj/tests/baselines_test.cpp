#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"
#include "torusfit/baselines.hpp"
#include "torusfit/fixtures.hpp"

using namespace torusfit;
using testsupport::Draw;

namespace {

constexpr double kTau = 2 * std::numbers::pi;

BaselineParams random_baseline(Draw& d, Family f) {
  BaselineParams b{f, d.unif(0, kTau), d.unif(0, kTau), 0, 0, 0};
  if (f == Family::wrapped_cauchy) {
    b.kappa1 = d.unif(0, 0.9);
    b.kappa2 = d.unif(0, 0.9);
    b.assoc = d.unif(-0.9, 0.9);
  } else {
    b.kappa1 = d.unif(0, 8);
    b.kappa2 = d.unif(0, 8);
    b.assoc = d.unif(-6, 6);
  }
  return b;
}

}  // namespace

TEST(Kernel, UniformWhenConcentrationsVanish) {
  const BaselineParams b{Family::vm_sine, 1.0, 2.0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(baseline_kernel(b, 0.3, 4.0), 1.0);
  const PmfTable t = discretize(b, TorusGrid(8, 5));
  EXPECT_LE((t.p.array() - 1.0 / 40).abs().maxCoeff(), 1e-15);
  const PmfTable wc = discretize({Family::wrapped_cauchy, 0, 0, 0, 0, 0}, TorusGrid(6, 6));
  EXPECT_LE((wc.p.array() - 1.0 / 36).abs().maxCoeff(), 1e-15);
}

TEST(Kernel, FactorizesWithoutAssociation) {
  for (Family f : {Family::vm_sine, Family::vm_cosine}) {
    const BaselineParams b{f, 0.7, 5.1, 2.5, 1.2, 0};
    const double t1 = 1.9, t2 = 0.4;
    const double a = std::exp(2.5 * std::cos(t1 - 0.7)), c = std::exp(1.2 * std::cos(t2 - 5.1));
    EXPECT_NEAR(baseline_kernel(b, t1, t2), a * c, 1e-12);
  }
}

TEST(Kernel, WrappedCauchyMatchesReference) {
  // rho = 0 reduces to the product of univariate wrapped Cauchy densities
  const double r1 = 0.4, r2 = 0.7, t1 = 1.1, t2 = 2.9;
  const BaselineParams b{Family::wrapped_cauchy, 0, 0, r1, r2, 0};
  const double u1 = (1 - r1 * r1) / (1 + r1 * r1 - 2 * r1 * std::cos(t1));
  const double u2 = (1 - r2 * r2) / (1 + r2 * r2 - 2 * r2 * std::cos(t2));
  const double ratio = baseline_kernel(b, t1, t2) / (u1 * u2);
  const double ratio0 = baseline_kernel(b, 0.3, 5.0) /
                        ((1 - r1 * r1) / (1 + r1 * r1 - 2 * r1 * std::cos(0.3)) * (1 - r2 * r2) /
                         (1 + r2 * r2 - 2 * r2 * std::cos(5.0)));
  EXPECT_NEAR(ratio / ratio0, 1.0, 1e-12);
}

TEST(Kernel, RejectsBadParameters) {
  EXPECT_THROW(baseline_kernel({Family::vm_sine, 0, 0, -1, 0, 0}, 0, 0), DomainError);
  EXPECT_THROW(baseline_kernel({Family::wrapped_cauchy, 0, 0, 0.5, 0.5, 1.0}, 0, 0), DomainError);
  EXPECT_THROW(baseline_kernel({Family::bwg, 0, 0, 0, 0, 0}, 0, 0), DomainError);
}

TEST(Discretize, SumsToOne) {
  Draw d(41);
  for (Family f : {Family::vm_sine, Family::vm_cosine, Family::wrapped_cauchy})
    for (int i = 0; i < 100; ++i) {
      const BaselineParams b = random_baseline(d, f);
      const TorusGrid g(d.integer(1, 16), d.integer(1, 16));
      EXPECT_NEAR(discretize(b, g).total(), 1.0, 1e-12);
      EXPECT_NEAR(discretize(b, g, Discretization::point).total(), 1.0, 1e-12);
      EXPECT_GE(discretize(b, g).p.minCoeff(), 0.0);
    }
}

TEST(Discretize, ConcentratedAtMeanDirection) {
  const BaselineParams b{Family::vm_sine, kTau * 5 / 16, kTau * 11 / 16, 40, 40, 0};
  for (Discretization how : {Discretization::sector, Discretization::point}) {
    Eigen::Index k, l;
    discretize(b, TorusGrid(16, 16), how).p.maxCoeff(&k, &l);
    EXPECT_EQ(k, 5);
    EXPECT_EQ(l, 11);
  }
}

TEST(Discretize, LargeConcentrationsStayFinite) {
  const BaselineParams b{Family::vm_cosine, 0, 0, 50, 50, -50};
  const PmfTable t = discretize(b, TorusGrid(16, 16));
  EXPECT_TRUE(t.p.allFinite());
  EXPECT_NEAR(t.total(), 1.0, 1e-12);
}

TEST(Discretize, SectorAndPointAgreeOnFineGrids) {
  const BaselineParams b{Family::vm_sine, 1.0, 2.0, 1.5, 0.8, 0.6};
  const PmfTable s = discretize(b, TorusGrid(120, 120)), p = discretize(b, TorusGrid(120, 120), Discretization::point);
  EXPECT_LE((s.p - p.p).cwiseAbs().maxCoeff() / s.p.maxCoeff(), 1e-3);
}

TEST(Vector, RoundTrip) {
  Draw d(42);
  for (Family f : {Family::vm_sine, Family::vm_cosine, Family::wrapped_cauchy}) {
    const BaselineParams b = random_baseline(d, f);
    const BaselineParams c = baseline_from_vector(f, baseline_vector(b));
    EXPECT_EQ(baseline_vector(c), baseline_vector(b));
    EXPECT_EQ(baseline_box(f).dim(), 5);
    EXPECT_TRUE(baseline_box(f).periodic[0]);
  }
}

TEST(FitBaseline, DatasetOneVonMisesSine) {
  FitOptions o;
  o.standard_errors = false;
  const FitResult r = fit_baseline(dataset("dataset1"), Family::vm_sine, o);
  EXPECT_EQ(r.num_params, 5);
  EXPECT_NEAR(r.aic, 976.045, 2.0);
  EXPECT_DOUBLE_EQ(r.aic, 10 - 2 * r.loglik);
  EXPECT_EQ(r.discretization, Discretization::sector);
}

TEST(FitBaseline, DatasetTwoVonMisesCosine) {
  FitOptions o;
  o.standard_errors = false;
  EXPECT_NEAR(fit_baseline(dataset("dataset2"), Family::vm_cosine, o).aic, 889.920, 2.0);
}

TEST(FitBaseline, RejectsOwnFamilies) {
  EXPECT_THROW(fit_baseline(dataset("dataset1"), Family::bwg), DomainError);
}

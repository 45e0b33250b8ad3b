#ifndef TORUSFIT_MOMENTS_HPP
#define TORUSFIT_MOMENTS_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "torusfit/distributions.hpp"

namespace torusfit {

// Raw trigonometric moments of (X1, X2) on the torus.
struct TrigMoments {
  double e_cos1 = 0, e_cos2 = 0, e_sin1 = 0, e_sin2 = 0;
  double e_cos1cos1 = 0, e_cos2cos2 = 0, e_sin1sin1 = 0, e_sin2sin2 = 0;
  double e_cos1cos2 = 0, e_cos1sin2 = 0, e_sin1cos2 = 0, e_sin1sin2 = 0;
  double e_cos1sin1 = 0, e_cos2sin2 = 0;

  Eigen::Vector2d mean1() const { return {e_cos1, e_sin1}; }
  Eigen::Vector2d mean2() const { return {e_cos2, e_sin2}; }
  Eigen::Matrix2d second1() const;
  Eigen::Matrix2d second2() const;
  // [[cos1 cos2, cos1 sin2], [sin1 cos2, sin1 sin2]]
  Eigen::Matrix2d cross() const;
};

// Building blocks of the closed-form moments. Index i runs over 0..3.
struct MomentAuxiliaries {
  Eigen::Array4d A, B, H, G, N, M;
  double phi = 0;  // 2 pi a/m1 - 2 pi b/m2
  double psi = 0;  // 2 pi a/m1 + 2 pi b/m2
  double H0 = 0;   // 1 / (A1 B1 + rho (1-q)^2 (1-s)^2)
};

// Covariance blocks of t1 = (cos X1, sin X1), t2 = (cos X2, sin X2).
struct EmbeddedCovariance {
  Eigen::Matrix2d s11, s12, s22;
};

struct CorrelationComponents {
  double rho1cc = 0, rho1cs = 0, rho1sc = 0, rho1ss = 0;
  double rho1p = 0, rho2p = 0;
  double rho1sq = 0;
};

// Variances and covariances with alpha = beta = 0, delta = +1.
struct BwgVarCov {
  double var_cos1 = 0, var_sin1 = 0, var_cos2 = 0, var_sin2 = 0;
  double cov_cos1cos2 = 0, cov_sin1sin2 = 0;
};

enum class MomentEngine { brute, closed };

TrigMoments trig_moments_brute(const PmfTable& table);
TrigMoments trig_moments_brute(const BwgParams& params);
TrigMoments trig_moments_brute(const BgwgParams& params);

MomentAuxiliaries moment_auxiliaries(const BgwgParams& params, bool b_uses_sine = false);
// Closed forms; general locations are handled by rotating the reduced result.
// `b_uses_sine` reproduces the alternative B_i = 1 + s^2 - 2s sin(.) for comparison.
TrigMoments trig_moments_closed(const BgwgParams& params, bool b_uses_sine = false);
TrigMoments trig_moments_closed(const BwgParams& params);

BwgVarCov bwg_varcov_closed(const BwgParams& params);

EmbeddedCovariance embedded_covariance(const TrigMoments& m);
// Throws SingularityError when det(S11) det(S22) <= 1e-14.
CorrelationComponents correlation_components(const TrigMoments& m);
// tr(S11^-1 S12 S22^-1 S21), computed by matrix algebra.
double rho1sq_trace(const TrigMoments& m);

double jupp_mardia_rho1sq(const BwgParams& params, MomentEngine engine = MomentEngine::brute);
double jupp_mardia_rho1sq(const BgwgParams& params, MomentEngine engine = MomentEngine::brute);

struct MonotonicityReport {
  std::vector<double> rho;
  std::vector<double> rho1sq;
  bool nondecreasing_nonnegative = true;  // over rho >= 0
  bool nonincreasing_negative = true;     // over rho < 0
  bool monotone() const noexcept { return nondecreasing_nonnegative && nonincreasing_negative; }
};

// Evaluates rho1^2 along `rho_grid` with every other parameter taken from `base`.
MonotonicityReport monotonicity_probe(const BwgParams& base, std::span<const double> rho_grid);
MonotonicityReport monotonicity_probe(const BgwgParams& base, std::span<const double> rho_grid);

}  // namespace torusfit

#endif  // TORUSFIT_MOMENTS_HPP

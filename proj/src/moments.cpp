#include "torusfit/moments.hpp"

#include <algorithm>

namespace torusfit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularTol = 1e-14;
constexpr double kMonotoneSlack = 1e-10;

Eigen::Matrix2d rotation(double t) {
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

TrigMoments assemble(const Eigen::Vector2d& t1, const Eigen::Vector2d& t2, const Eigen::Matrix2d& s1,
                     const Eigen::Matrix2d& s2, const Eigen::Matrix2d& x) {
  TrigMoments m;
  m.e_cos1 = t1(0), m.e_sin1 = t1(1);
  m.e_cos2 = t2(0), m.e_sin2 = t2(1);
  m.e_cos1cos1 = s1(0, 0), m.e_cos1sin1 = s1(0, 1), m.e_sin1sin1 = s1(1, 1);
  m.e_cos2cos2 = s2(0, 0), m.e_cos2sin2 = s2(0, 1), m.e_sin2sin2 = s2(1, 1);
  m.e_cos1cos2 = x(0, 0), m.e_cos1sin2 = x(0, 1), m.e_sin1cos2 = x(1, 0), m.e_sin1sin2 = x(1, 1);
  return m;
}

void require_interior(double q, double s) {
  if (!(q > 0 && q < 1 && s > 0 && s < 1)) throw DomainError("closed-form moments need q, s in (0, 1)");
}

}  // namespace

Eigen::Matrix2d TrigMoments::second1() const {
  Eigen::Matrix2d m;
  m << e_cos1cos1, e_cos1sin1, e_cos1sin1, e_sin1sin1;
  return m;
}

Eigen::Matrix2d TrigMoments::second2() const {
  Eigen::Matrix2d m;
  m << e_cos2cos2, e_cos2sin2, e_cos2sin2, e_sin2sin2;
  return m;
}

Eigen::Matrix2d TrigMoments::cross() const {
  Eigen::Matrix2d m;
  m << e_cos1cos2, e_cos1sin2, e_sin1cos2, e_sin1sin2;
  return m;
}

TrigMoments trig_moments_brute(const PmfTable& table) {
  const int m1 = table.grid.m1, m2 = table.grid.m2;
  Eigen::Matrix2Xd u1(2, m1), u2(2, m2);
  for (int k = 0; k < m1; ++k) u1.col(k) << std::cos(kTwoPi * k / m1), std::sin(kTwoPi * k / m1);
  for (int l = 0; l < m2; ++l) u2.col(l) << std::cos(kTwoPi * l / m2), std::sin(kTwoPi * l / m2);
  const Eigen::VectorXd p1 = table.p.rowwise().sum();
  const Eigen::VectorXd p2 = table.p.colwise().sum().transpose();
  const Eigen::Vector2d t1 = u1 * p1, t2 = u2 * p2;
  const Eigen::Matrix2d s1 = u1 * p1.asDiagonal() * u1.transpose();
  const Eigen::Matrix2d s2 = u2 * p2.asDiagonal() * u2.transpose();
  const Eigen::Matrix2d x = u1 * table.p * u2.transpose();
  return assemble(t1, t2, s1, s2, x);
}

TrigMoments trig_moments_brute(const BwgParams& params) { return trig_moments_brute(pmf_table(params)); }
TrigMoments trig_moments_brute(const BgwgParams& params) { return trig_moments_brute(pmf_table(params)); }

MomentAuxiliaries moment_auxiliaries(const BgwgParams& p, bool b_uses_sine) {
  p.validate();
  require_interior(p.q, p.s);
  const int m1 = p.grid.m1, m2 = p.grid.m2;
  const double q = p.q, s = p.s, a = p.a(), b = p.b();
  const double qm = 1 - std::pow(q, m1), sm = 1 - std::pow(s, m2);
  MomentAuxiliaries x;
  for (int i = 0; i < 4; ++i) {
    const double w1 = kTwoPi * i / m1, w2 = kTwoPi * i / m2;
    x.A(i) = 1 + q * q - 2 * q * std::cos(w1);
    x.B(i) = 1 + s * s - 2 * s * (b_uses_sine ? std::sin(w2) : std::cos(w2));
    x.H(i) = qm * (std::pow(q, a) - std::pow(q, 2 - a) - q * (std::pow(q, a) - std::pow(q, -a)) * std::cos(w1)) / x.A(i);
    x.G(i) = q * qm * (std::pow(q, -a) - std::pow(q, a)) * std::sin(w1) / x.A(i);
    x.N(i) = sm * (std::pow(s, b) - std::pow(s, 2 - b) - s * (std::pow(s, b) - std::pow(s, -b)) * std::cos(w2)) / x.B(i);
    x.M(i) = s * sm * (std::pow(s, -b) - std::pow(s, b)) * std::sin(w2) / x.B(i);
  }
  x.phi = kTwoPi * a / m1 - kTwoPi * b / m2;
  x.psi = kTwoPi * a / m1 + kTwoPi * b / m2;
  x.H0 = 1 / (x.A(1) * x.B(1) + p.rho * (1 - q) * (1 - q) * (1 - s) * (1 - s));
  return x;
}

namespace {

// Closed forms for locations already reduced to [0, 1).
TrigMoments closed_reduced(const BgwgParams& p, bool b_uses_sine) {
  const MomentAuxiliaries x = moment_auxiliaries(p, b_uses_sine);
  const auto &H = x.H, &G = x.G, &N = x.N, &M = x.M;
  const double r = p.rho;
  const double c7 = 1 / bgwg_inverse_normalizer_closed(p);
  TrigMoments m;
  if (p.delta == Delta::positive) {
    const double c = std::cos(x.phi), sn = std::sin(x.phi);
    m.e_cos1 = c7 * (H[1] * N[0] + .5 * r * ((H[2] * N[1] + G[2] * M[1] + H[0] * N[1]) * c -
                                             (H[2] * M[1] - G[2] * N[1] + H[0] * M[1]) * sn));
    m.e_cos2 = c7 * (H[0] * N[1] + .5 * r * ((H[1] * N[0] + H[1] * N[2] + G[1] * M[2]) * c +
                                             (G[1] * N[0] - H[1] * M[2] + G[1] * N[2]) * sn));
    m.e_sin1 = c7 * (G[1] * N[0] + .5 * r * ((H[0] * M[1] - H[2] * M[1] + G[2] * N[1]) * c +
                                             (H[0] * N[1] - H[2] * N[1] - G[2] * M[1]) * sn));
    m.e_sin2 = c7 * (H[0] * M[1] + .5 * r * ((G[1] * N[0] + H[1] * M[2] - G[1] * N[2]) * c +
                                             (H[1] * N[2] + G[1] * M[2] - H[1] * N[0]) * sn));
    m.e_cos1cos1 = .5 * c7 * (H[0] * N[0] + H[2] * N[0] +
                              .5 * r * (((3 * H[1] + H[3]) * N[1] + (G[1] + G[3]) * M[1]) * c -
                                        ((3 * H[1] + H[3]) * M[1] - (G[1] + G[3]) * N[1]) * sn));
    m.e_cos2cos2 = .5 * c7 * (H[0] * N[0] + H[0] * N[2] +
                              .5 * r * (((3 * N[1] + N[3]) * H[1] + (M[1] + M[3]) * G[1]) * c -
                                        ((M[1] + M[3]) * H[1] - (3 * N[1] + N[3]) * G[1]) * sn));
    m.e_sin1sin1 = .5 * c7 * (H[0] * N[0] - H[2] * N[0] +
                              .5 * r * (((H[1] - H[3]) * N[1] + (3 * G[1] - G[3]) * M[1]) * c -
                                        ((H[1] - H[3]) * M[1] - (3 * G[1] - G[3]) * N[1]) * sn));
    m.e_sin2sin2 = .5 * c7 * (H[0] * N[0] - H[0] * N[2] +
                              .5 * r * (((N[1] - N[3]) * H[1] + (3 * M[1] - M[3]) * G[1]) * c -
                                        ((3 * M[1] - M[3]) * H[1] - (N[1] - N[3]) * G[1]) * sn));
    m.e_cos1cos2 =
        c7 * (H[1] * N[1] + .25 * r * ((H[2] * N[0] + H[0] * N[2] + H[2] * N[2] + G[2] * M[2] + H[0] * N[0]) * c +
                                       (G[2] * N[0] - H[0] * M[2] - H[2] * M[2] + G[2] * N[2]) * sn));
    m.e_cos1sin2 =
        c7 * (H[1] * M[1] + .25 * r * ((G[2] * N[0] + H[0] * M[2] - G[2] * N[2] + H[2] * M[2]) * c +
                                       (H[0] * N[2] - H[2] * N[0] + H[2] * N[2] + G[2] * M[2] - H[0] * N[0]) * sn));
    m.e_sin1cos2 =
        c7 * (G[1] * N[1] + .25 * r * ((G[2] * N[0] + H[0] * M[2] - H[2] * M[2] + G[2] * N[2]) * c +
                                       (H[0] * N[2] - H[2] * N[0] - H[2] * N[2] - G[2] * M[2] + H[0] * N[0]) * sn));
    m.e_sin1sin2 =
        c7 * (G[1] * M[1] - .25 * r * ((H[2] * N[0] + H[0] * N[2] - H[2] * N[2] - G[2] * M[2] - H[0] * N[0]) * c +
                                       (G[2] * N[0] - H[0] * M[2] + H[2] * M[2] - G[2] * N[2]) * sn));
    m.e_cos1sin1 = .5 * c7 * (G[2] * N[0] + .5 * r * ((H[1] * M[1] - H[3] * M[1] + G[1] * N[1] + G[3] * N[1]) * c +
                                                      (H[1] * N[1] - H[3] * N[1] - G[1] * M[1] - G[3] * M[1]) * sn));
    m.e_cos2sin2 = .5 * c7 * (H[0] * M[2] + .5 * r * ((M[1] * H[1] + M[3] * H[1] + N[1] * G[1] - N[3] * G[1]) * c +
                                                      (N[3] * H[1] - N[1] * H[1] + M[1] * G[1] + M[3] * G[1]) * sn));
  } else {
    const double c = std::cos(x.psi), sn = std::sin(x.psi);
    m.e_cos1 = c7 * (H[1] * N[0] + r / 2 * ((H[2] * N[1] - G[2] * M[1] + H[0] * N[1]) * c +
                                            (H[2] * M[1] + G[2] * N[1] + H[0] * M[1]) * sn));
    m.e_cos2 = c7 * (H[0] * N[1] + r / 2 * ((H[1] * N[2] - G[1] * M[2] + H[1] * N[0]) * c +
                                            (H[1] * M[2] + G[1] * N[2] + G[1] * N[0]) * sn));
    m.e_sin1 = c7 * (G[1] * N[0] + r / 2 * ((H[2] * M[1] + G[2] * N[1] - H[0] * M[1]) * c +
                                            (G[2] * M[1] - H[2] * N[1] + H[0] * N[1]) * sn));
    m.e_sin2 = c7 * (H[0] * M[1] + r / 2 * ((H[1] * M[2] + G[1] * N[2] - G[1] * N[0]) * c +
                                            (G[1] * M[2] - H[1] * N[2] + H[1] * N[0]) * sn));
    m.e_cos1cos1 = c7 / 2 * (H[0] * N[0] + H[2] * N[0] +
                             r / 2 * ((3 * H[1] * N[1] - G[1] * M[1] + H[3] * N[1] - G[3] * M[1]) * c +
                                      (3 * H[1] * M[1] + G[1] * N[1] + H[3] * M[1] + G[3] * N[1]) * sn));
    m.e_cos2cos2 = c7 / 2 * (H[0] * N[0] + H[0] * N[2] +
                             r / 2 * ((3 * H[1] * N[1] - G[1] * M[1] + H[1] * N[3] - G[1] * M[3]) * c +
                                      (H[1] * M[1] + 3 * G[1] * N[1] + H[1] * M[3] + G[1] * N[3]) * sn));
    m.e_sin1sin1 = c7 / 2 * (H[0] * N[0] - H[2] * N[0] +
                             r / 2 * ((H[1] * N[1] - 3 * G[1] * M[1] - H[3] * N[1] + G[3] * M[1]) * c +
                                      (H[1] * M[1] + 3 * G[1] * N[1] - H[3] * M[1] - G[3] * N[1]) * sn));
    m.e_sin2sin2 = c7 / 2 * (H[0] * N[0] - H[0] * N[2] +
                             r / 2 * ((H[1] * N[1] - 3 * G[1] * M[1] - H[1] * N[3] + G[1] * M[3]) * c +
                                      (3 * H[1] * M[1] + G[1] * N[1] - H[1] * M[3] - G[1] * N[3]) * sn));
    m.e_cos1cos2 =
        c7 * (H[1] * N[1] + r / 4 * ((H[2] * N[2] - G[2] * M[2] + H[0] * N[0] + H[2] * N[0] + H[0] * N[2]) * c +
                                     (H[2] * M[2] + G[2] * N[2] + G[2] * N[0] + H[0] * M[2]) * sn));
    m.e_cos1sin2 =
        c7 * (H[1] * M[1] + r / 4 * ((H[2] * M[2] + G[2] * N[2] - G[2] * N[0] + H[0] * M[2]) * c +
                                     (G[2] * M[2] - H[2] * N[2] + H[0] * N[0] + H[2] * N[0] - H[0] * N[2]) * sn));
    m.e_sin1cos2 =
        c7 * (G[1] * N[1] + r / 4 * ((H[2] * M[2] + G[2] * N[2] + G[2] * N[0] - H[0] * M[2]) * c -
                                     (H[2] * N[2] - G[2] * M[2] - H[0] * N[0] + H[2] * N[0] - H[0] * N[2]) * sn));
    m.e_sin1sin2 =
        c7 * (G[1] * M[1] - r / 4 * ((H[2] * N[2] - G[2] * M[2] + H[0] * N[0] - H[2] * N[0] - H[0] * N[2]) * c +
                                     (H[2] * M[2] + G[2] * N[2] - G[2] * N[0] - H[0] * M[2]) * sn));
    m.e_cos1sin1 = c7 / 2 * (G[2] * N[0] + r / 2 * ((H[3] * M[1] + G[3] * N[1] - H[1] * M[1] + G[1] * N[1]) * c +
                                                    (H[1] * N[1] + G[1] * M[1] - H[3] * N[1] + G[3] * M[1]) * sn));
    m.e_cos2sin2 = c7 / 2 * (H[0] * M[2] + r / 2 * ((H[1] * M[1] + H[1] * M[3] - G[1] * N[1] + G[1] * N[3]) * c +
                                                    (H[1] * N[1] - H[1] * N[3] + G[1] * M[1] + G[1] * M[3]) * sn));
  }
  return m;
}

}  // namespace

TrigMoments trig_moments_closed(const BgwgParams& params, bool b_uses_sine) {
  params.validate();
  require_interior(params.q, params.s);
  const double n1 = std::floor(params.alpha), n2 = std::floor(params.beta);
  BgwgParams reduced = params;
  reduced.alpha = params.a();
  reduced.beta = params.b();
  const TrigMoments m = closed_reduced(reduced, b_uses_sine);
  if (n1 == 0 && n2 == 0) return m;
  // Shifting the location by whole grid steps rotates each embedded angle.
  const Eigen::Matrix2d r1 = rotation(kTwoPi * n1 / params.grid.m1);
  const Eigen::Matrix2d r2 = rotation(kTwoPi * n2 / params.grid.m2);
  return assemble(r1 * m.mean1(), r2 * m.mean2(), r1 * m.second1() * r1.transpose(),
                  r2 * m.second2() * r2.transpose(), r1 * m.cross() * r2.transpose());
}

TrigMoments trig_moments_closed(const BwgParams& params) {
  params.validate();
  return trig_moments_closed(BgwgParams::from(params));
}

BwgVarCov bwg_varcov_closed(const BwgParams& p) {
  p.validate();
  if (p.alpha != 0 || p.beta != 0 || p.delta != Delta::positive)
    throw DomainError("closed-form variances assume alpha = beta = 0 and delta = +1");
  require_interior(p.q, p.s);
  const MomentAuxiliaries x = moment_auxiliaries(BgwgParams::from(p));
  const auto &A = x.A, &B = x.B;
  const double q = p.q, s = p.s, rho = p.rho, h = x.H0;
  const double q1 = 1 - q, s1 = 1 - s;
  const double pq = 1 / q1 + q1 / A[2], ps = 1 / s1 + s1 / B[2];
  BwgVarCov v;
  v.var_sin1 = .5 * q1 * A[1] * h *
               (B[1] * (1 / q1 - q1 / A[2]) + q1 * s1 * s1 * (1 / A[1] - .5 * (1 / A[3] + 1 / A[1])) * rho);
  v.var_sin2 = .5 * s1 * B[1] * h *
               (A[1] * (1 / s1 - s1 / B[2]) + q1 * q1 * s1 * (1 / B[1] - .5 * (1 / B[3] + 1 / B[1])) * rho);
  v.var_cos1 = q1 * A[1] * h * h *
               (A[1] * B[1] * B[1] / 2 * pq - B[1] * B[1] * std::pow(q1, 3) / A[1] +
                (A[1] * B[1] * q1 * s1 * s1 / 4 * (1 / A[3] + 3 / A[1]) - B[1] * q1 * q1 / 2 * s1 * s1 * pq) * rho -
                .25 * (A[1] * q1 * std::pow(s1, 4) * pq * pq - std::pow(q1, 3) * std::pow(s1, 4) * (1 / A[3] + 3 / A[1])) *
                    rho * rho);
  v.var_cos2 = s1 * B[1] * h * h *
               (A[1] * A[1] * B[1] / 2 * ps - A[1] * A[1] * std::pow(s1, 3) / B[1] +
                (A[1] * B[1] / 4 * q1 * q1 * s1 * (1 / B[3] + 3 / B[1]) - A[1] * s1 * s1 / 2 * q1 * q1 * ps) * rho -
                .25 * (B[1] * std::pow(q1, 4) * s1 * ps * ps - std::pow(q1, 4) * std::pow(s1, 3) * (1 / B[3] + 3 / B[1])) *
                    rho * rho);
  v.cov_sin1sin2 = .25 * q1 * s1 * A[1] * B[1] * h * (s1 / B[2] - 1 / s1) * (q1 / A[2] - 1 / q1) * rho;
  v.cov_cos1cos2 = q1 * s1 * h * h * (A[1] * A[1] / 2 * pq - std::pow(q1, 3)) *
                   (B[1] * B[1] / 2 * ps - std::pow(s1, 3)) * rho;
  return v;
}

EmbeddedCovariance embedded_covariance(const TrigMoments& m) {
  const Eigen::Vector2d t1 = m.mean1(), t2 = m.mean2();
  return {m.second1() - t1 * t1.transpose(), m.cross() - t1 * t2.transpose(), m.second2() - t2 * t2.transpose()};
}

CorrelationComponents correlation_components(const TrigMoments& m) {
  const EmbeddedCovariance c = embedded_covariance(m);
  const double vc1 = c.s11(0, 0), vs1 = c.s11(1, 1), c1 = c.s11(0, 1);
  const double vc2 = c.s22(0, 0), vs2 = c.s22(1, 1), c2 = c.s22(0, 1);
  const double cc = c.s12(0, 0), cs = c.s12(0, 1), sc = c.s12(1, 0), ss = c.s12(1, 1);
  const double h2 = (vc1 * vs1 - c1 * c1) * (vc2 * vs2 - c2 * c2);
  if (!(h2 > kSingularTol)) throw SingularityError("embedded covariance is singular (degenerate marginal)");
  const double h1 = (cc * cc * vs2 + cs * cs * vc2) * vs1 + (sc * sc * vs2 + ss * ss * vc2) * vc1 +
                    2 * (cc * ss + cs * sc) * c1 * c2 - 2 * (cc * sc * vs2 + cs * ss * vc2) * c1 -
                    2 * (cc * cs * vs1 + sc * ss * vc1) * c2;
  CorrelationComponents r;
  r.rho1cc = cc / std::sqrt(vc1 * vc2);
  r.rho1cs = cs / std::sqrt(vc1 * vs2);
  r.rho1sc = sc / std::sqrt(vs1 * vc2);
  r.rho1ss = ss / std::sqrt(vs1 * vs2);
  r.rho1p = c1 / std::sqrt(vc1 * vs1);
  r.rho2p = c2 / std::sqrt(vc2 * vs2);
  r.rho1sq = std::max(0.0, h1 / h2);
  return r;
}

double rho1sq_trace(const TrigMoments& m) {
  const EmbeddedCovariance c = embedded_covariance(m);
  if (!(c.s11.determinant() * c.s22.determinant() > kSingularTol))
    throw SingularityError("embedded covariance is singular (degenerate marginal)");
  return (c.s11.inverse() * c.s12 * c.s22.inverse() * c.s12.transpose()).trace();
}

namespace {

template <typename Params>
double rho1sq_impl(const Params& p, MomentEngine engine) {
  p.validate();
  if (p.q == 0.0 || p.s == 0.0) throw DomainError("rho1^2 undefined for a degenerate marginal (q or s = 0)");
  const TrigMoments m = engine == MomentEngine::closed ? trig_moments_closed(p) : trig_moments_brute(p);
  return correlation_components(m).rho1sq;
}

template <typename Params>
MonotonicityReport probe_impl(const Params& base, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("rho grid must be ascending");
  MonotonicityReport rep;
  for (double r : grid) {
    if (!(r >= -1 && r <= 1)) throw DomainError("rho grid values must lie in [-1, 1]");
    Params p = base;
    p.rho = r;
    rep.rho.push_back(r);
    rep.rho1sq.push_back(jupp_mardia_rho1sq(p));
  }
  for (std::size_t i = 1; i < rep.rho.size(); ++i) {
    const double diff = rep.rho1sq[i] - rep.rho1sq[i - 1];
    if (rep.rho[i - 1] >= 0 && diff < -kMonotoneSlack) rep.nondecreasing_nonnegative = false;
    if (rep.rho[i] < 0 && diff > kMonotoneSlack) rep.nonincreasing_negative = false;
  }
  return rep;
}

}  // namespace

double jupp_mardia_rho1sq(const BwgParams& params, MomentEngine engine) { return rho1sq_impl(params, engine); }
double jupp_mardia_rho1sq(const BgwgParams& params, MomentEngine engine) { return rho1sq_impl(params, engine); }

MonotonicityReport monotonicity_probe(const BwgParams& base, std::span<const double> rho_grid) {
  return probe_impl(base, rho_grid);
}
MonotonicityReport monotonicity_probe(const BgwgParams& base, std::span<const double> rho_grid) {
  return probe_impl(base, rho_grid);
}

}  // namespace torusfit

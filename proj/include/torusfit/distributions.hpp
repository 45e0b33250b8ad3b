#ifndef TORUSFIT_DISTRIBUTIONS_HPP
#define TORUSFIT_DISTRIBUTIONS_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "torusfit/torus.hpp"

namespace torusfit {

// Sense of the dependence: +1 rotational, -1 anti-rotational.
enum class Delta : int { negative = -1, positive = 1 };

constexpr int sign(Delta d) noexcept { return static_cast<int>(d); }
Delta delta_from_int(int value);

enum class Axis { first, second };

// Wrapped symmetric geometric law on Z_m.
struct WsgParams {
  int m = 1;
  double q = 0.5;
  int alpha = 0;

  void validate() const;
};

// Bivariate wrapped geometric: integer locations.
struct BwgParams {
  TorusGrid grid;
  int alpha = 0;
  int beta = 0;
  double q = 0.5;
  double s = 0.5;
  double rho = 0.0;
  Delta delta = Delta::positive;

  void validate() const;
  bool interior() const noexcept { return q > 0.0 && q < 1.0 && s > 0.0 && s < 1.0; }
};

// Bivariate generalized wrapped geometric: real locations in [0, m).
struct BgwgParams {
  TorusGrid grid;
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.5;
  double s = 0.5;
  double rho = 0.0;
  Delta delta = Delta::positive;

  double a() const noexcept { return alpha - std::floor(alpha); }
  double b() const noexcept { return beta - std::floor(beta); }
  void validate() const;

  static BgwgParams from(const BwgParams& p) {
    return {p.grid, double(p.alpha), double(p.beta), p.q, p.s, p.rho, p.delta};
  }
};

// m1 x m2 table of probabilities, p(k, l).
struct PmfTable {
  TorusGrid grid;
  Eigen::MatrixXd p;

  double operator()(int k, int l) const { return p(k, l); }
  // Row-major, left-to-right sum.
  double total() const;
  Eigen::VectorXd marginal(Axis axis) const;
};

// Kernel pieces, templated so tests can evaluate oracles in extended precision.

// q^z + q^(m - z), with q^z = exp(z ln q).
template <typename Scalar>
Scalar wsg_factor(Scalar z, Scalar q, int m) {
  using std::exp;
  using std::log;
  if (q == Scalar(0)) return (z == Scalar(0) ? Scalar(1) : Scalar(0)) + (z == Scalar(m) ? Scalar(1) : Scalar(0));
  const Scalar lq = log(q);
  return exp(z * lq) + exp((Scalar(m) - z) * lq);
}

// 1 + rho cos(2 pi z1/m1 - delta 2 pi z2/m2)
template <typename Scalar>
Scalar link_factor(Scalar z1, Scalar z2, int m1, int m2, Scalar rho, Delta delta) {
  using std::cos;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  return Scalar(1) + rho * cos(two_pi * z1 / Scalar(m1) - Scalar(sign(delta)) * two_pi * z2 / Scalar(m2));
}

// Unnormalized joint kernel shared by BWG and BGWG (q, s in (0,1)).
template <typename Scalar>
Scalar torus_kernel(const TorusGrid& grid, Scalar alpha, Scalar beta, Scalar q, Scalar s, Scalar rho,
                    Delta delta, int k, int l) {
  const Scalar z1 = zeta<Scalar>(k, alpha, grid.m1);
  const Scalar z2 = zeta<Scalar>(l, beta, grid.m2);
  return wsg_factor(z1, q, grid.m1) * wsg_factor(z2, s, grid.m2) *
         link_factor(z1, z2, grid.m1, grid.m2, rho, delta);
}

double wsg_pmf(const WsgParams& params, int k);
Eigen::VectorXd wsg_vector(const WsgParams& params);

// Closed-form normalizing constant C1 (interior q, s only).
double bwg_normalizer(const BwgParams& params);
// Joint pmf; boundary q, s in {0, 1} dispatch to the limiting forms.
double bwg_pmf(const BwgParams& params, GridPoint point);

// 1/C7 by direct row-major summation of the kernel (authoritative).
double bgwg_inverse_normalizer(const BgwgParams& params);
// 1/C7 from the closed form; the second cosine of the s^(1-b) term uses (1 - b).
double bgwg_inverse_normalizer_closed(const BgwgParams& params);
// Same closed form with (1 - a) in that last slot. Only agrees with direct
// summation when a and b share a fractional part.
double bgwg_inverse_normalizer_swapped(const BgwgParams& params);
double bgwg_pmf(const BgwgParams& params, GridPoint point);

// Marginal of X1 (Axis::first) or X2 (Axis::second).
Eigen::VectorXd marginal_pmf(const BwgParams& params, Axis which);
// Law of the other variable given `given_axis` takes `index`.
Eigen::VectorXd conditional_pmf(const BwgParams& params, Axis given_axis, int index);

// Mirror image with the roles of X1 and X2 exchanged.
BwgParams swap_axes(const BwgParams& params);
BgwgParams swap_axes(const BgwgParams& params);

// All cells within 1e-12 of the maximum, sorted by (k, l).
std::vector<GridPoint> joint_mode(const PmfTable& table);
std::vector<GridPoint> joint_mode(const BwgParams& params);
std::vector<GridPoint> joint_mode(const BgwgParams& params);

PmfTable pmf_table(const BwgParams& params);
PmfTable pmf_table(const BgwgParams& params);

}  // namespace torusfit

#endif  // TORUSFIT_DISTRIBUTIONS_HPP

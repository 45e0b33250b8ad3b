#include "torusfit/distributions.hpp"

#include <algorithm>
#include <string>

namespace torusfit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kModeTolerance = 1e-12;

enum class Edge { zero, interior, one };

Edge classify(double c) {
  if (c == 0.0) return Edge::zero;
  if (c == 1.0) return Edge::one;
  return Edge::interior;
}

void check_unit(double c, const char* name) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void check_rho(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
}

// 1 + c^2 - 2c cos(2 pi i / m)
double quad_term(double c, int m, int i) { return 1.0 + c * c - 2.0 * c * std::cos(kTwoPi * i / m); }

// (1 - c) / ((1 - c^m)(1 + c)), the WSG normalizer.
double wsg_norm(double c, int m) { return (1.0 - c) / ((1.0 - std::pow(c, m)) * (1.0 + c)); }

// A single-point axis carries no information about its concentration.
BwgParams collapse_trivial_axes(BwgParams p) {
  if (p.grid.m1 == 1) p.q = 0.5;
  if (p.grid.m2 == 1) p.s = 0.5;
  return p;
}

}  // namespace

Delta delta_from_int(int value) {
  if (value == 1) return Delta::positive;
  if (value == -1) return Delta::negative;
  throw DomainError("delta must be -1 or +1, got " + std::to_string(value));
}

void WsgParams::validate() const {
  if (m < 1) throw DomainError("grid size must be >= 1");
  check_unit(q, "q");
  if (alpha < 0 || alpha >= m) throw DomainError("alpha must lie in Z_m");
}

void BwgParams::validate() const {
  if (grid.m1 < 1 || grid.m2 < 1) throw DomainError("grid sizes must be >= 1");
  if (alpha < 0 || alpha >= grid.m1) throw DomainError("alpha must lie in Z_m1");
  if (beta < 0 || beta >= grid.m2) throw DomainError("beta must lie in Z_m2");
  check_unit(q, "q");
  check_unit(s, "s");
  check_rho(rho);
  if (delta != Delta::positive && delta != Delta::negative) throw DomainError("delta must be -1 or +1");
}

void BgwgParams::validate() const {
  if (grid.m1 < 1 || grid.m2 < 1) throw DomainError("grid sizes must be >= 1");
  if (!(alpha >= 0.0 && alpha < grid.m1)) throw DomainError("alpha must lie in [0, m1)");
  if (!(beta >= 0.0 && beta < grid.m2)) throw DomainError("beta must lie in [0, m2)");
  check_unit(q, "q");
  check_unit(s, "s");
  check_rho(rho);
  if (delta != Delta::positive && delta != Delta::negative) throw DomainError("delta must be -1 or +1");
}

double PmfTable::total() const {
  double sum = 0.0;
  for (int k = 0; k < p.rows(); ++k)
    for (int l = 0; l < p.cols(); ++l) sum += p(k, l);
  return sum;
}

Eigen::VectorXd PmfTable::marginal(Axis axis) const {
  if (axis == Axis::first) return p.rowwise().sum();
  return p.colwise().sum().transpose();
}

double wsg_pmf(const WsgParams& params, int k) {
  params.validate();
  if (k < 0 || k >= params.m) throw DomainError("grid index out of range");
  if (params.m == 1) return 1.0;
  if (params.q == 0.0) return k == params.alpha ? 1.0 : 0.0;
  if (params.q == 1.0) return 1.0 / params.m;
  const double z = zeta<double>(k, params.alpha, params.m);
  return wsg_norm(params.q, params.m) * wsg_factor(z, params.q, params.m);
}

Eigen::VectorXd wsg_vector(const WsgParams& params) {
  Eigen::VectorXd v(params.m);
  for (int k = 0; k < params.m; ++k) v(k) = wsg_pmf(params, k);
  return v;
}

double bwg_normalizer(const BwgParams& params) {
  params.validate();
  if (!params.interior()) throw DomainError("C1 requires q, s in (0, 1); use the limiting forms");
  const auto [m1, m2] = std::pair{params.grid.m1, params.grid.m2};
  const double q = params.q, s = params.s;
  const double a1 = quad_term(q, m1, 1), b1 = quad_term(s, m2, 1);
  const double ratio = a1 * b1 / (a1 * b1 + params.rho * (1 - q) * (1 - q) * (1 - s) * (1 - s));
  return wsg_norm(q, m1) * wsg_norm(s, m2) * ratio;
}

double bwg_pmf(const BwgParams& raw, GridPoint point) {
  raw.validate();
  if (!raw.grid.contains(point.k, point.l)) throw DomainError("grid point out of range");
  const BwgParams p = collapse_trivial_axes(raw);
  const int m1 = p.grid.m1, m2 = p.grid.m2;
  const double q = p.q, s = p.s, rho = p.rho;
  const double z1 = zeta<double>(point.k, p.alpha, m1);
  const double z2 = zeta<double>(point.l, p.beta, m2);
  const bool at_alpha = point.k == p.alpha, at_beta = point.l == p.beta;
  const double link = link_factor(z1, z2, m1, m2, rho, p.delta);

  switch (classify(q)) {
    case Edge::interior:
      switch (classify(s)) {
        case Edge::interior:
          return bwg_normalizer(p) * wsg_factor(z1, q, m1) * wsg_factor(z2, s, m2) * link;
        case Edge::zero: {
          if (!at_beta) return 0.0;
          const double a1 = quad_term(q, m1, 1);
          const double c3 = wsg_norm(q, m1) * a1 / (a1 + rho * (1 - q) * (1 - q));
          return c3 * wsg_factor(z1, q, m1) * (1 + rho * std::cos(kTwoPi * z1 / m1));
        }
        case Edge::one:
          return wsg_norm(q, m1) * wsg_factor(z1, q, m1) * link / m2;
      }
      break;
    case Edge::zero:
      switch (classify(s)) {
        case Edge::interior: {
          if (!at_alpha) return 0.0;
          const double b1 = quad_term(s, m2, 1);
          const double c2 = wsg_norm(s, m2) * b1 / (b1 + rho * (1 - s) * (1 - s));
          return c2 * wsg_factor(z2, s, m2) * (1 + rho * std::cos(kTwoPi * z2 / m2));
        }
        case Edge::zero:
          return at_alpha && at_beta ? 1.0 : 0.0;
        case Edge::one:
          return at_alpha ? (1 + rho * std::cos(kTwoPi * z2 / m2)) / m2 : 0.0;
      }
      break;
    case Edge::one:
      switch (classify(s)) {
        case Edge::interior:
          return wsg_norm(s, m2) * wsg_factor(z2, s, m2) * link / m1;
        case Edge::zero:
          return at_beta ? (1 + rho * std::cos(kTwoPi * z1 / m1)) / m1 : 0.0;
        case Edge::one:
          return link / (double(m1) * m2);
      }
      break;
  }
  return 0.0;  // unreachable
}

double bgwg_inverse_normalizer(const BgwgParams& params) {
  params.validate();
  double sum = 0.0;
  for (int k = 0; k < params.grid.m1; ++k)
    for (int l = 0; l < params.grid.m2; ++l)
      sum += torus_kernel(params.grid, params.alpha, params.beta, params.q, params.s, params.rho, params.delta, k, l);
  return sum;
}

namespace {

double bgwg_closed_form(const BgwgParams& params, bool swapped) {
  params.validate();
  const int m1 = params.grid.m1, m2 = params.grid.m2;
  const double q = params.q, s = params.s, a = params.a(), b = params.b();
  const double d = sign(params.delta);
  if (!(q > 0 && q < 1 && s > 0 && s < 1)) throw DomainError("closed-form 1/C7 requires q, s in (0, 1)");
  const double t1 = kTwoPi / m1, t2 = kTwoPi / m2;
  const double qa = std::pow(q, a) - std::pow(q, 2 - a);
  const double qb = std::pow(q, 1 - a) - std::pow(q, 1 + a);
  const double last = swapped ? 1 - a : 1 - b;
  const double c8 =
      (std::pow(s, b) - std::pow(s, 2 - b)) *
          (qa * std::cos(t1 * a - d * t2 * b) + qb * std::cos(t1 * (1 - a) + d * t2 * b)) +
      (std::pow(s, 1 - b) - std::pow(s, 1 + b)) *
          (qa * std::cos(t1 * a + d * t2 * (1 - b)) + qb * std::cos(t1 * (1 - a) - d * t2 * last));
  const double base = (std::pow(q, a) + std::pow(q, 1 - a)) * (std::pow(s, b) + std::pow(s, 1 - b)) /
                      ((1 - q) * (1 - s));
  return (1 - std::pow(q, m1)) * (1 - std::pow(s, m2)) *
         (base + params.rho * c8 / (quad_term(q, m1, 1) * quad_term(s, m2, 1)));
}

}  // namespace

double bgwg_inverse_normalizer_closed(const BgwgParams& params) { return bgwg_closed_form(params, false); }
double bgwg_inverse_normalizer_swapped(const BgwgParams& params) { return bgwg_closed_form(params, true); }

double bgwg_pmf(const BgwgParams& params, GridPoint point) {
  params.validate();
  if (!params.grid.contains(point.k, point.l)) throw DomainError("grid point out of range");
  if (!(params.q > 0 && params.q < 1 && params.s > 0 && params.s < 1))
    throw DomainError("BGWG requires q, s in (0, 1); for integer locations use the BWG limiting forms");
  const double kern = torus_kernel(params.grid, params.alpha, params.beta, params.q, params.s, params.rho,
                                   params.delta, point.k, point.l);
  return kern / bgwg_inverse_normalizer(params);
}

BwgParams swap_axes(const BwgParams& p) {
  return {TorusGrid(p.grid.m2, p.grid.m1), p.beta, p.alpha, p.s, p.q, p.rho, p.delta};
}

BgwgParams swap_axes(const BgwgParams& p) {
  return {TorusGrid(p.grid.m2, p.grid.m1), p.beta, p.alpha, p.s, p.q, p.rho, p.delta};
}

Eigen::VectorXd marginal_pmf(const BwgParams& raw, Axis which) {
  raw.validate();
  if (which == Axis::second) return marginal_pmf(swap_axes(raw), Axis::first);
  const BwgParams p = collapse_trivial_axes(raw);
  const int m1 = p.grid.m1, m2 = p.grid.m2;
  const double q = p.q, s = p.s, rho = p.rho;
  Eigen::VectorXd out(m1);
  const Edge eq = classify(q), es = classify(s);
  for (int k = 0; k < m1; ++k) {
    const double z1 = zeta<double>(k, p.alpha, m1);
    const double c1 = std::cos(kTwoPi * z1 / m1);
    double v = 0.0;
    if (eq == Edge::zero) {
      v = k == p.alpha ? 1.0 : 0.0;
    } else if (eq == Edge::interior && es == Edge::interior) {
      const double a1 = quad_term(q, m1, 1), b1 = quad_term(s, m2, 1);
      const double c4 = wsg_norm(q, m1) * a1 / (a1 * b1 + rho * (1 - q) * (1 - q) * (1 - s) * (1 - s));
      v = c4 * wsg_factor(z1, q, m1) * (b1 + rho * (1 - s) * (1 - s) * c1);
    } else if (eq == Edge::interior && es == Edge::one) {
      v = wsg_norm(q, m1) * wsg_factor(z1, q, m1);
    } else if (eq == Edge::interior && es == Edge::zero) {
      const double a1 = quad_term(q, m1, 1);
      const double c5 = (1 - q) * a1 / ((1 - std::pow(q, m1)) * (1 + q) * (a1 + rho * (1 - q) * (1 - q)));
      v = c5 * wsg_factor(z1, q, m1) * (1 + rho * c1);
    } else if (es == Edge::interior) {  // q == 1
      v = (1 + rho * (1 - s) * (1 - s) * c1 / quad_term(s, m2, 1)) / m1;
    } else if (es == Edge::one) {  // q == s == 1
      v = 1.0 / m1;
    } else {  // q == 1, s == 0: row sum of the joint limit
      v = (1 + rho * c1) / m1;
    }
    out(k) = v;
  }
  return out;
}

Eigen::VectorXd conditional_pmf(const BwgParams& raw, Axis given_axis, int index) {
  raw.validate();
  if (given_axis == Axis::second) return conditional_pmf(swap_axes(raw), Axis::first, index);
  if (index < 0 || index >= raw.grid.m1) throw DomainError("conditioning index out of range");
  const BwgParams p = collapse_trivial_axes(raw);
  const int m1 = p.grid.m1, m2 = p.grid.m2;
  Eigen::VectorXd out(m2);
  if (p.interior()) {
    const double s = p.s, rho = p.rho;
    const double z1 = zeta<double>(index, p.alpha, m1);
    const double b1 = quad_term(s, m2, 1);
    const double c6 = wsg_norm(s, m2) * b1;
    const double denom = b1 + rho * (1 - s) * (1 - s) * std::cos(kTwoPi * z1 / m1);
    for (int l = 0; l < m2; ++l) {
      const double z2 = zeta<double>(l, p.beta, m2);
      out(l) = c6 * wsg_factor(z2, s, m2) * link_factor(z1, z2, m1, m2, rho, p.delta) / denom;
    }
    return out;
  }
  const double marg = marginal_pmf(p, Axis::first)(index);
  if (!(marg > 0.0)) throw DomainError("conditioning on a value with zero probability");
  for (int l = 0; l < m2; ++l) out(l) = bwg_pmf(p, {index, l}) / marg;
  return out;
}

std::vector<GridPoint> joint_mode(const PmfTable& table) {
  const double top = table.p.maxCoeff();
  std::vector<GridPoint> modes;
  for (int k = 0; k < table.p.rows(); ++k)
    for (int l = 0; l < table.p.cols(); ++l)
      if (table.p(k, l) >= top - kModeTolerance) modes.push_back({k, l});
  return modes;  // row-major scan is already (k, l) order
}

std::vector<GridPoint> joint_mode(const BwgParams& params) { return joint_mode(pmf_table(params)); }
std::vector<GridPoint> joint_mode(const BgwgParams& params) { return joint_mode(pmf_table(params)); }

PmfTable pmf_table(const BwgParams& params) {
  params.validate();
  PmfTable t{params.grid, Eigen::MatrixXd(params.grid.m1, params.grid.m2)};
  for (int k = 0; k < params.grid.m1; ++k)
    for (int l = 0; l < params.grid.m2; ++l) t.p(k, l) = bwg_pmf(params, {k, l});
  return t;
}

PmfTable pmf_table(const BgwgParams& params) {
  params.validate();
  if (!(params.q > 0 && params.q < 1 && params.s > 0 && params.s < 1))
    throw DomainError("BGWG requires q, s in (0, 1); for integer locations use the BWG limiting forms");
  const TorusGrid& g = params.grid;
  PmfTable t{g, Eigen::MatrixXd(g.m1, g.m2)};
  Eigen::VectorXd f1(g.m1), f2(g.m2), z1(g.m1), z2(g.m2);
  for (int k = 0; k < g.m1; ++k) {
    z1(k) = zeta<double>(k, params.alpha, g.m1);
    f1(k) = wsg_factor(z1(k), params.q, g.m1);
  }
  for (int l = 0; l < g.m2; ++l) {
    z2(l) = zeta<double>(l, params.beta, g.m2);
    f2(l) = wsg_factor(z2(l), params.s, g.m2);
  }
  double sum = 0.0;
  for (int k = 0; k < g.m1; ++k)
    for (int l = 0; l < g.m2; ++l) {
      t.p(k, l) = f1(k) * f2(l) * link_factor(z1(k), z2(l), g.m1, g.m2, params.rho, params.delta);
      sum += t.p(k, l);
    }
  t.p /= sum;
  return t;
}

}  // namespace torusfit

#include "torusfit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "torusfit/baselines.hpp"
#include "torusfit/parallel.hpp"

namespace torusfit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-9;

struct Cell {
  int k, l;
  double count;
};

std::vector<Cell> occupied(const CountTable& d) {
  std::vector<Cell> cells;
  for (int k = 0; k < d.grid.m1; ++k)
    for (int l = 0; l < d.grid.m2; ++l)
      if (d.counts(k, l) > 0) cells.push_back({k, l, double(d.counts(k, l))});
  return cells;
}

// log(q^z + q^(m-z)) for z = 0..m-1 at real offset `shift` (z = j + shift).
void log_wsg_factors(double q, int m, double shift, Eigen::VectorXd& out) {
  const double lq = std::log(q);
  out.resize(m);
  for (int j = 0; j < m; ++j) {
    const double z = j + shift;
    // log-sum-exp keeps tiny q finite
    const double a = z * lq, b = (m - z) * lq;
    const double hi = std::max(a, b);
    out(j) = hi + std::log1p(std::exp(std::min(a, b) - hi));
  }
}

double log_c1(double q, double s, double rho, int m1, int m2) {
  const double a1 = 1 + q * q - 2 * q * std::cos(kTwoPi / m1);
  const double b1 = 1 + s * s - 2 * s * std::cos(kTwoPi / m2);
  const double corr = a1 * b1 + rho * (1 - q) * (1 - q) * (1 - s) * (1 - s);
  return std::log1p(-q) + std::log1p(-s) - std::log1p(-std::pow(q, m1)) - std::log1p(-std::pow(s, m2)) -
         std::log1p(q) - std::log1p(s) + std::log(a1 * b1) - std::log(corr);
}

Box unit_box(double eps) {
  Eigen::Vector3d lo(eps, eps, -1.0), hi(1 - eps, 1 - eps, 1.0);
  return Box(lo, hi);
}

// Counts re-expressed in offsets (z1, z2) from a fixed integer location.
struct BwgBranch {
  Eigen::VectorXd row, col;  // marginal counts by z1 and z2
  std::vector<Cell> cells;   // occupied cells, k/l hold z1/z2
};

BwgBranch make_branch(const CountTable& d, const std::vector<Cell>& occ, int alpha, int beta) {
  BwgBranch b;
  b.row = Eigen::VectorXd::Zero(d.grid.m1);
  b.col = Eigen::VectorXd::Zero(d.grid.m2);
  for (const Cell& c : occ) {
    const int z1 = wrap_index(c.k - alpha, d.grid.m1), z2 = wrap_index(c.l - beta, d.grid.m2);
    b.row(z1) += c.count;
    b.col(z2) += c.count;
    b.cells.push_back({z1, z2, c.count});
  }
  return b;
}

double bwg_branch_loglik(const BwgBranch& b, const Eigen::MatrixXd& cosines, const TorusGrid& g, double n,
                         const Eigen::VectorXd& x) {
  const double q = x(0), s = x(1), rho = x(2);
  Eigen::VectorXd f1, f2;
  log_wsg_factors(q, g.m1, 0.0, f1);
  log_wsg_factors(s, g.m2, 0.0, f2);
  double ll = n * log_c1(q, s, rho, g.m1, g.m2) + b.row.dot(f1) + b.col.dot(f2);
  for (const Cell& c : b.cells) {
    const double link = 1 + rho * cosines(c.k, c.l);
    if (!(link > 0)) return kNegInf;
    ll += c.count * std::log(link);
  }
  return ll;
}

std::vector<Eigen::Vector3d> bwg_starts(int requested) {
  std::vector<Eigen::Vector3d> all;
  all.emplace_back(0.5, 0.5, 0.0);
  for (double r : {-0.6, 0.6}) all.emplace_back(0.5, 0.5, r);
  for (double q : {0.15, 0.5, 0.85})
    for (double s : {0.15, 0.5, 0.85})
      for (double r : {-0.6, 0.0, 0.6}) {
        if (q == 0.5 && s == 0.5) continue;
        all.emplace_back(q, s, r);
      }
  if (requested > 0 && requested < int(all.size())) all.resize(requested);
  return all;
}

void finish(FitResult& fit, const CountTable& data, const FitOptions& options) {
  fit.num_params = parameter_count(fit.family);
  fit.aic = aic(fit.num_params, fit.loglik);
  if (options.standard_errors && std::isfinite(fit.loglik)) {
    const StandardErrors se = standard_errors(data, fit, options.eps);
    fit.std_errors = se.se;
    fit.se_pseudo_inverse = se.pseudo_inverse;
    fit.at_boundary = se.at_boundary;
    if (se.pseudo_inverse) fit.diagnostics.push_back("Hessian not positive definite; SEs from pseudo-inverse");
    for (const auto& name : se.at_boundary) fit.diagnostics.push_back(name + " at its box edge; one-sided SE");
  }
}

}  // namespace

double log_likelihood(const CountTable& data, const PmfTable& model, std::string* diagnostic) {
  data.validate();
  if (!(data.grid == model.grid)) throw DomainError("data and model grids differ");
  double ll = 0.0;
  for (int k = 0; k < data.grid.m1; ++k)
    for (int l = 0; l < data.grid.m2; ++l) {
      const int c = data.counts(k, l);
      if (c == 0) continue;
      const double p = model.p(k, l);
      if (!(p > 0)) {
        if (diagnostic)
          *diagnostic = "zero model probability at observed cell (" + std::to_string(k) + ", " + std::to_string(l) + ")";
        return kNegInf;
      }
      ll += c * std::log(p);
    }
  return ll;
}

double log_likelihood(const CountTable& data, const BwgParams& params, std::string* diagnostic) {
  return log_likelihood(data, pmf_table(params), diagnostic);
}

double log_likelihood(const CountTable& data, const BgwgParams& params, std::string* diagnostic) {
  return log_likelihood(data, pmf_table(params), diagnostic);
}

int parameter_count(Family f) { return is_baseline(f) ? 5 : 6; }
double aic(int num_params, double loglik) { return 2.0 * num_params - 2.0 * loglik; }
double aic(const FitResult& fit) { return aic(fit.num_params, fit.loglik); }

double concentration_from_resultant(double r, int m, double eps) {
  // E cos(X - alpha) of the WSG falls from 1 (q = 0) to 0 (q = 1)
  auto resultant = [m](double q) {
    const Eigen::VectorXd p = wsg_vector({m, q, 0});
    double e = 0;
    for (int k = 0; k < m; ++k) e += p(k) * std::cos(kTwoPi * k / m);
    return e;
  };
  double lo = eps, hi = 1 - eps;
  if (r >= resultant(lo)) return lo;
  if (r <= resultant(hi)) return hi;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (resultant(mid) > r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FitResult fit_bwg(const CountTable& data, const FitOptions& options) {
  data.validate();
  const TorusGrid g = data.grid;
  const std::vector<Cell> occ = occupied(data);
  const double n = double(data.n);
  const Box box = unit_box(options.eps);
  const std::vector<Eigen::Vector3d> starts = bwg_starts(options.starts);

  // cos(2 pi z1/m1 - delta 2 pi z2/m2) per delta
  Eigen::MatrixXd cosines[2];
  for (int di = 0; di < 2; ++di) {
    const int d = di == 0 ? -1 : 1;
    cosines[di].resize(g.m1, g.m2);
    for (int z1 = 0; z1 < g.m1; ++z1)
      for (int z2 = 0; z2 < g.m2; ++z2) cosines[di](z1, z2) = std::cos(kTwoPi * z1 / g.m1 - d * kTwoPi * z2 / g.m2);
  }

  // candidate order: delta = -1 first, then alpha, then beta
  const std::size_t per_delta = std::size_t(g.m1) * g.m2;
  struct Outcome {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double ll = kNegInf;
    long evals = 0;
    bool converged = false;
  };
  std::vector<Outcome> out(2 * per_delta);
  parallel_for(out.size(), [&](std::size_t idx) {
    const int di = int(idx / per_delta);
    const int alpha = int(idx % per_delta) / g.m2, beta = int(idx % per_delta) % g.m2;
    const BwgBranch br = make_branch(data, occ, alpha, beta);
    const Objective f = [&](const Eigen::VectorXd& x) { return -bwg_branch_loglik(br, cosines[di], g, n, x); };
    Outcome best;
    for (const auto& s0 : starts) {
      const OptimResult r = nelder_mead(f, s0, box, options.optimizer);
      best.evals += r.evaluations;
      if (std::isfinite(r.f) && (!std::isfinite(best.ll) || -r.f > best.ll + kTieTol)) {
        best.x = r.x;
        best.ll = -r.f;
        best.converged = r.converged;
      }
    }
    out[idx] = best;
  });

  FitResult fit;
  fit.family = Family::bwg;
  std::size_t winner = out.size();
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const int di = int(idx / per_delta);
    const int alpha = int(idx % per_delta) / g.m2, beta = int(idx % per_delta) % g.m2;
    fit.discrete_search.push_back({di == 0 ? Delta::negative : Delta::positive, alpha, beta, out[idx].ll});
    fit.evaluations += out[idx].evals;
    if (!std::isfinite(out[idx].ll)) continue;
    if (winner == out.size() || out[idx].ll > out[winner].ll + kTieTol) winner = idx;
  }
  if (winner == out.size()) throw DomainError("no discrete candidate produced a finite log-likelihood");
  const int di = int(winner / per_delta);
  const Outcome& w = out[winner];
  fit.params = BwgParams{g, int(winner % per_delta) / g.m2, int(winner % per_delta) % g.m2, w.x(0), w.x(1), w.x(2),
                         di == 0 ? Delta::negative : Delta::positive};
  fit.loglik = w.ll;
  fit.converged = w.converged;
  finish(fit, data, options);
  return fit;
}

namespace {

// Angle-addition form of the BGWG kernel: the link term needs only cos/sin of
// the location shift per evaluation, the rest is tabulated once.
struct BgwgObjective {
  TorusGrid g;
  int delta;
  double n;
  std::vector<Cell> occ;
  Eigen::MatrixXd cu, su;  // cos, sin of 2 pi k/m1 - delta 2 pi l/m2

  BgwgObjective(const CountTable& d, Delta dl) : g(d.grid), delta(sign(dl)), n(double(d.n)), occ(occupied(d)) {
    cu.resize(g.m1, g.m2);
    su.resize(g.m1, g.m2);
    for (int k = 0; k < g.m1; ++k)
      for (int l = 0; l < g.m2; ++l) {
        const double u = kTwoPi * k / g.m1 - delta * kTwoPi * l / g.m2;
        cu(k, l) = std::cos(u);
        su(k, l) = std::sin(u);
      }
  }

  // x = (alpha, beta, q, s, rho); alpha, beta already wrapped into [0, m)
  double loglik(const Eigen::VectorXd& x) const {
    const double alpha = x(0), beta = x(1), q = x(2), s = x(3), rho = x(4);
    const double c = kTwoPi * alpha / g.m1 - delta * kTwoPi * beta / g.m2;
    const double cc = std::cos(c), sc = std::sin(c);
    // zeta(k) = k - alpha (+ m1 when negative)
    Eigen::VectorXd f1(g.m1), f2(g.m2);
    const double lq = std::log(q), ls = std::log(s);
    for (int k = 0; k < g.m1; ++k) {
      double z = k - alpha;
      if (z < 0) z += g.m1;
      f1(k) = std::exp(z * lq) + std::exp((g.m1 - z) * lq);
    }
    for (int l = 0; l < g.m2; ++l) {
      double z = l - beta;
      if (z < 0) z += g.m2;
      f2(l) = std::exp(z * ls) + std::exp((g.m2 - z) * ls);
    }
    double total = 0;
    for (int k = 0; k < g.m1; ++k) {
      double row = 0;
      for (int l = 0; l < g.m2; ++l) row += f2(l) * (1 + rho * (cu(k, l) * cc + su(k, l) * sc));
      total += f1(k) * row;
    }
    if (!(total > 0) || !std::isfinite(total)) return kNegInf;
    double ll = -n * std::log(total);
    for (const Cell& e : occ) {
      const double kern = f1(e.k) * f2(e.l) * (1 + rho * (cu(e.k, e.l) * cc + su(e.k, e.l) * sc));
      if (!(kern > 0)) return kNegInf;
      ll += e.count * std::log(kern);
    }
    return ll;
  }
};

Box bgwg_box(const TorusGrid& g, double eps) {
  Eigen::VectorXd lo(5), hi(5);
  lo << 0, 0, eps, eps, -1;
  hi << g.m1, g.m2, 1 - eps, 1 - eps, 1;
  Box b(lo, hi);
  b.periodic[0] = b.periodic[1] = true;
  return b;
}

std::vector<int> anchors(int m, int limit) {
  std::vector<int> a;
  const int count = std::min(m, limit);
  for (int i = 0; i < count; ++i) a.push_back(int(std::floor(double(i) * m / count)));
  return a;
}

double axis_resultant(const CountTable& d, Axis axis) {
  const Eigen::MatrixXd c = d.counts.cast<double>();
  const Eigen::VectorXd marg = axis == Axis::first ? Eigen::VectorXd(c.rowwise().sum())
                                                   : Eigen::VectorXd(c.colwise().sum().transpose());
  const int m = int(marg.size());
  double cs = 0, sn = 0;
  for (int k = 0; k < m; ++k) {
    cs += marg(k) * std::cos(kTwoPi * k / m);
    sn += marg(k) * std::sin(kTwoPi * k / m);
  }
  return std::hypot(cs, sn) / marg.sum();
}

}  // namespace

FitResult fit_bgwg(const CountTable& data, const FitOptions& options) {
  data.validate();
  const TorusGrid g = data.grid;
  const Box box = bgwg_box(g, options.eps);
  const double qh = concentration_from_resultant(axis_resultant(data, Axis::first), g.m1, options.eps);
  const double sh = concentration_from_resultant(axis_resultant(data, Axis::second), g.m2, options.eps);

  std::vector<Eigen::Vector3d> shapes{{0.5, 0.5, 0.0}, {qh, sh, 0.0}};
  if (options.starts > 0) shapes.resize(std::min<std::size_t>(shapes.size(), options.starts));
  const std::vector<int> a1 = anchors(g.m1, 8), a2 = anchors(g.m2, 8);

  struct Start {
    int di;
    Eigen::VectorXd x0;
  };
  std::vector<Start> jobs;
  for (int di = 0; di < 2; ++di)
    for (int a : a1)
      for (int b : a2)
        for (const auto& sh3 : shapes) {
          Eigen::VectorXd x0(5);
          x0 << a, b, sh3(0), sh3(1), sh3(2);
          jobs.push_back({di, x0});
        }

  const BgwgObjective objectives[2] = {BgwgObjective(data, Delta::negative), BgwgObjective(data, Delta::positive)};
  std::vector<OptimResult> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const BgwgObjective& obj = objectives[jobs[i].di];
    const Objective f = [&](const Eigen::VectorXd& x) { return -obj.loglik(x); };
    results[i] = nelder_mead(f, jobs[i].x0, box, options.optimizer);
  });

  FitResult fit;
  fit.family = Family::bgwg;
  std::size_t best[2] = {jobs.size(), jobs.size()};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    fit.evaluations += results[i].evaluations;
    if (!std::isfinite(results[i].f)) continue;
    std::size_t& b = best[jobs[i].di];
    if (b == jobs.size() || results[i].f < results[b].f - kTieTol) b = i;
  }
  for (int di = 0; di < 2; ++di)
    fit.discrete_search.push_back({di == 0 ? Delta::negative : Delta::positive, std::nullopt, std::nullopt,
                                   best[di] == jobs.size() ? kNegInf : -results[best[di]].f});
  std::size_t win = best[0];
  if (win == jobs.size() || (best[1] != jobs.size() && results[best[1]].f < results[win].f - kTieTol)) win = best[1];
  if (win == jobs.size()) throw DomainError("no start produced a finite log-likelihood");

  const Eigen::VectorXd& x = results[win].x;
  fit.params = BgwgParams{g, x(0), x(1), x(2), x(3), x(4), jobs[win].di == 0 ? Delta::negative : Delta::positive};
  fit.loglik = -results[win].f;
  fit.converged = results[win].converged;
  finish(fit, data, options);
  return fit;
}

std::vector<std::string> continuous_names(Family f) {
  switch (f) {
    case Family::bwg: return {"q", "s", "rho"};
    case Family::bgwg: return {"alpha", "beta", "q", "s", "rho"};
    case Family::wrapped_cauchy: return {"mu1", "mu2", "rho1", "rho2", "rho"};
    case Family::vm_sine: return {"mu1", "mu2", "kappa1", "kappa2", "lambda"};
    case Family::vm_cosine: return {"mu1", "mu2", "kappa1", "kappa2", "kappa3"};
  }
  return {};
}

Eigen::VectorXd continuous_vector(const FittedParams& params) {
  if (const auto* p = std::get_if<BwgParams>(&params)) return Eigen::Vector3d(p->q, p->s, p->rho);
  if (const auto* p = std::get_if<BgwgParams>(&params)) {
    Eigen::VectorXd x(5);
    x << p->alpha, p->beta, p->q, p->s, p->rho;
    return x;
  }
  return baseline_vector(std::get<BaselineParams>(params));
}

Box continuous_box(const FitResult& fit, double eps) {
  switch (fit.family) {
    case Family::bwg: return unit_box(eps);
    case Family::bgwg: return bgwg_box(std::get<BgwgParams>(fit.params).grid, eps);
    default: return baseline_box(fit.family, eps);
  }
}

Objective continuous_loglik(const CountTable& data, const FitResult& fit) {
  if (const auto* p = std::get_if<BwgParams>(&fit.params)) {
    const BwgParams base = *p;
    return [&data, base](const Eigen::VectorXd& x) {
      BwgParams q = base;
      q.q = x(0), q.s = x(1), q.rho = x(2);
      return log_likelihood(data, q);
    };
  }
  if (const auto* p = std::get_if<BgwgParams>(&fit.params)) {
    auto obj = std::make_shared<BgwgObjective>(data, p->delta);
    return [obj](const Eigen::VectorXd& x) { return obj->loglik(x); };
  }
  const BaselineParams base = std::get<BaselineParams>(fit.params);
  const Discretization how = fit.discretization;
  return [&data, base, how](const Eigen::VectorXd& x) {
    return baseline_loglik(data, baseline_from_vector(base.model, x), how);
  };
}

StandardErrors standard_errors(const Objective& loglik, const Eigen::VectorXd& at, const Box& box,
                               const std::vector<std::string>& names) {
  const Eigen::Index d = at.size();
  StandardErrors out;
  Eigen::VectorXd h(d), center = at;
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i) = 1e-4 * std::max(1.0, std::abs(at(i)));
    if (box.periodic[i]) continue;
    // keep the stencil inside the box: shift it off the edge
    const double lo = box.lower(i) + h(i), hi = box.upper(i) - h(i);
    if (at(i) < lo || at(i) > hi) {
      center(i) = std::clamp(at(i), lo, hi);
      out.at_boundary.push_back(names[i]);
    }
  }
  auto f = [&](Eigen::VectorXd x) {
    box.project(x);
    return -loglik(x);
  };
  const double f0 = f(center);
  Eigen::MatrixXd hess(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd xp = center, xm = center;
    xp(i) += h(i);
    xm(i) -= h(i);
    hess(i, i) = (f(xp) - 2 * f0 + f(xm)) / (h(i) * h(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      Eigen::VectorXd pp = center, pm = center, mp = center, mm = center;
      pp(i) += h(i), pp(j) += h(j);
      pm(i) += h(i), pm(j) -= h(j);
      mp(i) -= h(i), mp(j) += h(j);
      mm(i) -= h(i), mm(j) -= h(j);
      hess(i, j) = hess(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h(i) * h(j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  const double cutoff = 1e-8 * std::max(top, 1.0);
  Eigen::MatrixXd cov;
  if (eig.info() == Eigen::Success && ev.minCoeff() > cutoff) {
    cov = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  } else {
    out.pseudo_inverse = true;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i)
      if (ev(i) > cutoff) inv(i) = 1 / ev(i);
    cov = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  }
  for (Eigen::Index i = 0; i < d; ++i) out.se[names[i]] = std::sqrt(std::max(0.0, cov(i, i)));
  return out;
}

StandardErrors standard_errors(const CountTable& data, const FitResult& fit, double eps) {
  return standard_errors(continuous_loglik(data, fit), continuous_vector(fit.params), continuous_box(fit, eps),
                         continuous_names(fit.family));
}

}  // namespace torusfit

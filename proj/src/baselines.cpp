#include "torusfit/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "torusfit/inference.hpp"
#include "torusfit/parallel.hpp"

namespace torusfit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kNodes = 8;
constexpr double kKappaMax = 50.0;

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

const Rule& rule(Discretization how) {
  static const Rule point{{0.0}, {1.0}};
  static const Rule sector = [] {
    using gl = boost::math::quadrature::gauss<double, kNodes>;
    Rule r;
    const auto& a = gl::abscissa();
    const auto& w = gl::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
      if (a[i] != 0.0) {
        r.x.push_back(-a[i]);
        r.w.push_back(w[i]);
      }
    }
    return r;
  }();
  return how == Discretization::sector ? sector : point;
}

struct WcCoefficients {
  double c0, c1, c2, c3, c4;
};

WcCoefficients wc_coefficients(double r1, double r2, double r) {
  const double ar = std::abs(r);
  const double p = 1 + r * r, p1 = 1 + r1 * r1, p2 = 1 + r2 * r2;
  return {p * p1 * p2 - 8 * ar * r1 * r2,
          2 * p * r1 * p2 - 4 * ar * r2 * p1,
          2 * p * r2 * p1 - 4 * ar * r1 * p2,
          -4 * p * r1 * r2 + 2 * ar * p1 * p2,
          2 * r * (1 - r1 * r1) * (1 - r2 * r2)};
}

// Offsets d = theta - mu at every quadrature node of every cell of one axis.
struct AxisNodes {
  Eigen::MatrixXd c, s;  // m x nodes
};

AxisNodes axis_nodes(int m, double mu, const Rule& r) {
  const int nn = int(r.x.size());
  AxisNodes a{Eigen::MatrixXd(m, nn), Eigen::MatrixXd(m, nn)};
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < nn; ++j) {
      const double d = kTwoPi * k / m + (std::numbers::pi / m) * r.x[j] - mu;
      a.c(k, j) = std::cos(d);
      a.s(k, j) = std::sin(d);
    }
  return a;
}

}  // namespace

double baseline_kernel(const BaselineParams& p, double theta1, double theta2) {
  p.validate();
  const double d1 = theta1 - p.mu1, d2 = theta2 - p.mu2;
  switch (p.model) {
    case Family::vm_sine:
      return std::exp(p.kappa1 * std::cos(d1) + p.kappa2 * std::cos(d2) + p.assoc * std::sin(d1) * std::sin(d2));
    case Family::vm_cosine:
      return std::exp(p.kappa1 * std::cos(d1) + p.kappa2 * std::cos(d2) - p.assoc * std::cos(d1 - d2));
    case Family::wrapped_cauchy: {
      const WcCoefficients c = wc_coefficients(p.kappa1, p.kappa2, p.assoc);
      return 1.0 / (c.c0 - c.c1 * std::cos(d1) - c.c2 * std::cos(d2) - c.c3 * std::cos(d1) * std::cos(d2) -
                    c.c4 * std::sin(d1) * std::sin(d2));
    }
    default:
      throw DomainError("not a baseline family");
  }
}

PmfTable discretize(const BaselineParams& p, const TorusGrid& grid, Discretization how) {
  p.validate();
  const Rule& r = rule(how);
  const int nn = int(r.x.size());
  const AxisNodes a1 = axis_nodes(grid.m1, p.mu1, r), a2 = axis_nodes(grid.m2, p.mu2, r);
  PmfTable t{grid, Eigen::MatrixXd::Zero(grid.m1, grid.m2)};
  const WcCoefficients wc = p.model == Family::wrapped_cauchy ? wc_coefficients(p.kappa1, p.kappa2, p.assoc)
                                                               : WcCoefficients{};
  // exponents are shifted by their maxima so large concentrations cannot overflow
  const double shift = p.kappa1 + p.kappa2 + std::abs(p.assoc);
  for (int k = 0; k < grid.m1; ++k)
    for (int l = 0; l < grid.m2; ++l) {
      double cell = 0;
      for (int i = 0; i < nn; ++i) {
        const double c1 = a1.c(k, i), s1 = a1.s(k, i);
        for (int j = 0; j < nn; ++j) {
          const double c2 = a2.c(l, j), s2 = a2.s(l, j);
          double v;
          switch (p.model) {
            case Family::vm_sine:
              v = std::exp(p.kappa1 * c1 + p.kappa2 * c2 + p.assoc * s1 * s2 - shift);
              break;
            case Family::vm_cosine:
              v = std::exp(p.kappa1 * c1 + p.kappa2 * c2 - p.assoc * (c1 * c2 + s1 * s2) - shift);
              break;
            default:
              v = 1.0 / (wc.c0 - wc.c1 * c1 - wc.c2 * c2 - wc.c3 * c1 * c2 - wc.c4 * s1 * s2);
          }
          cell += r.w[i] * r.w[j] * v;
        }
      }
      t.p(k, l) = cell;
    }
  double total = 0;
  for (int k = 0; k < grid.m1; ++k)
    for (int l = 0; l < grid.m2; ++l) total += t.p(k, l);
  if (!(total > 0) || !std::isfinite(total)) throw DomainError("baseline kernel vanishes on the grid");
  t.p /= total;
  return t;
}

Eigen::VectorXd baseline_vector(const BaselineParams& p) {
  Eigen::VectorXd x(5);
  x << p.mu1, p.mu2, p.kappa1, p.kappa2, p.assoc;
  return x;
}

BaselineParams baseline_from_vector(Family model, const Eigen::VectorXd& x) {
  if (x.size() != 5) throw DomainError("baseline parameter vector must have 5 entries");
  return {model, x(0), x(1), x(2), x(3), x(4)};
}

Box baseline_box(Family model, double eps) {
  Eigen::VectorXd lo(5), hi(5);
  if (model == Family::wrapped_cauchy) {
    lo << 0, 0, 0, 0, -1 + eps;
    hi << kTwoPi, kTwoPi, 1 - eps, 1 - eps, 1 - eps;
  } else {
    lo << 0, 0, 0, 0, -kKappaMax;
    hi << kTwoPi, kTwoPi, kKappaMax, kKappaMax, kKappaMax;
  }
  Box b(lo, hi);
  b.periodic[0] = b.periodic[1] = true;
  return b;
}

double baseline_loglik(const CountTable& data, const BaselineParams& params, Discretization how) {
  return log_likelihood(data, discretize(params, data.grid, how));
}

namespace {

struct AxisSummary {
  double mean_angle, mode_angle, resultant;
};

AxisSummary summarize(const Eigen::VectorXd& marg) {
  const int m = int(marg.size());
  double c = 0, s = 0;
  Eigen::Index mode = 0;
  marg.maxCoeff(&mode);
  for (int k = 0; k < m; ++k) {
    c += marg(k) * std::cos(kTwoPi * k / m);
    s += marg(k) * std::sin(kTwoPi * k / m);
  }
  double mean = std::atan2(s, c);
  if (mean < 0) mean += kTwoPi;
  return {mean, kTwoPi * double(mode) / m, std::hypot(c, s) / marg.sum()};
}

// Rough inverse of the von Mises mean resultant length.
double kappa_from_resultant(double r) {
  if (r < 0.53) return 2 * r + r * r * r + 5 * std::pow(r, 5) / 6;
  if (r < 0.85) return -0.4 + 1.39 * r + 0.43 / (1 - r);
  return std::min(kKappaMax, 1 / (r * r * r - 4 * r * r + 3 * r));
}

}  // namespace

FitResult fit_baseline(const CountTable& data, Family model, const FitOptions& options) {
  data.validate();
  if (!is_baseline(model)) throw DomainError("fit_baseline needs wc, vms or vmc");
  const Box box = baseline_box(model, options.eps);
  const Eigen::MatrixXd counts = data.counts.cast<double>();
  const AxisSummary x1 = summarize(counts.rowwise().sum()), x2 = summarize(counts.colwise().sum().transpose());

  const bool wc = model == Family::wrapped_cauchy;
  const double k1 = wc ? std::min(x1.resultant, 0.9) : kappa_from_resultant(x1.resultant);
  const double k2 = wc ? std::min(x2.resultant, 0.9) : kappa_from_resultant(x2.resultant);
  const double assoc = wc ? 0.3 : 1.0;

  std::vector<double> mu1{x1.mean_angle}, mu2{x2.mean_angle};
  if (std::abs(std::remainder(x1.mode_angle - x1.mean_angle, kTwoPi)) > 1e-9) mu1.push_back(x1.mode_angle);
  if (std::abs(std::remainder(x2.mode_angle - x2.mean_angle, kTwoPi)) > 1e-9) mu2.push_back(x2.mode_angle);
  std::vector<Eigen::VectorXd> starts;
  for (double a : mu1)
    for (double b : mu2)
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd x0(5);
        x0 << a, b, k1, k2, sgn * assoc;
        starts.push_back(x0);
      }
  if (options.starts > 0 && options.starts < int(starts.size())) starts.resize(options.starts);

  std::vector<OptimResult> results(starts.size());
  const Discretization how = options.discretization;
  parallel_for(starts.size(), [&](std::size_t i) {
    const Objective f = [&](const Eigen::VectorXd& x) {
      return -baseline_loglik(data, baseline_from_vector(model, x), how);
    };
    results[i] = nelder_mead(f, starts[i], box, options.optimizer);
  });

  std::size_t win = 0;
  FitResult fit;
  for (std::size_t i = 0; i < results.size(); ++i) {
    fit.evaluations += results[i].evaluations;
    if (results[i].f < results[win].f - 1e-9) win = i;
  }
  if (!std::isfinite(results[win].f)) throw DomainError("baseline fit produced no finite log-likelihood");
  fit.family = model;
  fit.discretization = how;
  fit.params = baseline_from_vector(model, results[win].x);
  fit.loglik = -results[win].f;
  fit.converged = results[win].converged;
  fit.num_params = parameter_count(model);
  fit.aic = aic(fit.num_params, fit.loglik);
  if (options.standard_errors) {
    const StandardErrors se = standard_errors(data, fit, options.eps);
    fit.std_errors = se.se;
    fit.se_pseudo_inverse = se.pseudo_inverse;
    fit.at_boundary = se.at_boundary;
  }
  return fit;
}

}  // namespace torusfit

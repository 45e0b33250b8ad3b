#include "torusfit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "torusfit/errors.hpp"

namespace torusfit {

Box::Box(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)), periodic(lower.size(), false) {
  if (lower.size() != upper.size()) throw DomainError("box bounds differ in length");
  if (((upper - lower).array() < 0).any()) throw DomainError("box lower bound exceeds upper bound");
}

void Box::project(Eigen::VectorXd& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (periodic[i]) {
      const double w = upper(i) - lower(i);
      double r = std::fmod(x(i) - lower(i), w);
      if (r < 0) r += w;
      if (r >= w) r = 0;
      x(i) = lower(i) + r;
    } else {
      x(i) = std::clamp(x(i), lower(i), upper(i));
    }
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Search {
  const Objective& f;
  const Box& box;
  const NelderMeadOptions& opt;
  int evals = 0;

  // Clamped coordinates are stored; periodic ones stay unwrapped in the simplex
  // (so vertices on both sides of the seam keep a sensible centroid) and are
  // only wrapped for evaluation.
  double eval(Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!box.periodic[i]) x(i) = std::clamp(x(i), box.lower(i), box.upper(i));
    Eigen::VectorXd y = x;
    box.project(y);
    ++evals;
    const double v = f(y);
    return std::isfinite(v) ? v : kInf;
  }

  // One simplex run from x0; returns true when the tolerances were met.
  bool run(Eigen::VectorXd& best, double& fbest) {
    const Eigen::Index n = best.size();
    std::vector<Eigen::VectorXd> pts(n + 1, best);
    std::vector<double> fv(n + 1);
    fv[0] = fbest;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = box.upper(i) - box.lower(i);
      double h = opt.initial_step * (std::isfinite(w) ? w : std::max(1.0, std::abs(best(i))));
      if (h == 0) h = 1e-3;
      // step inward when the start sits on the upper face
      if (!box.periodic[i] && best(i) + h > box.upper(i)) h = -h;
      pts[i + 1](i) += h;
      fv[i + 1] = eval(pts[i + 1]);
    }
    std::vector<int> order(n + 1);
    bool converged = false;
    while (evals < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      const int lo = order[0], hi = order[n], nh = order[n - 1];
      double size = 0;
      for (Eigen::Index j = 1; j <= n; ++j) size = std::max(size, (pts[order[j]] - pts[lo]).cwiseAbs().maxCoeff());
      if (std::isfinite(fv[hi]) && fv[hi] - fv[lo] <= opt.ftol && size <= std::sqrt(opt.xtol)) {
        converged = true;
        break;
      }
      if (size <= opt.xtol) {
        converged = std::isfinite(fv[lo]);
        break;
      }
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < n; ++j) centroid += pts[order[j]];
      centroid /= double(n);

      Eigen::VectorXd xr = centroid + (centroid - pts[hi]);
      const double fr = eval(xr);
      if (fr < fv[lo]) {
        Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[hi]);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[hi] = xe, fv[hi] = fe;
        } else {
          pts[hi] = xr, fv[hi] = fr;
        }
      } else if (fr < fv[nh]) {
        pts[hi] = xr, fv[hi] = fr;
      } else {
        const bool outside = fr < fv[hi];
        Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                     : Eigen::VectorXd(centroid + 0.5 * (pts[hi] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[hi])) {
          pts[hi] = xc, fv[hi] = fc;
        } else {
          for (int j = 1; j <= n; ++j) {
            const int idx = order[j];
            pts[idx] = pts[lo] + 0.5 * (pts[idx] - pts[lo]);
            fv[idx] = eval(pts[idx]);
          }
        }
      }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    best = pts[it - fv.begin()];
    fbest = *it;
    return converged;
  }
};

}  // namespace

OptimResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const Box& box, const NelderMeadOptions& options) {
  if (x0.size() != box.dim()) throw DomainError("start point and box differ in dimension");
  Search s{f, box, options};
  double fx = s.eval(x0);
  bool converged = s.run(x0, fx);
  for (int r = 0; r < options.restarts && s.evals < options.max_evaluations; ++r) {
    const double before = fx;
    converged = s.run(x0, fx);
    if (before - fx <= options.ftol) break;
  }
  box.project(x0);
  return {x0, fx, s.evals, converged};
}

}  // namespace torusfit

#ifndef TORUSFIT_OPTIMIZE_HPP
#define TORUSFIT_OPTIMIZE_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace torusfit {

// Box for the simplex search. Periodic coordinates wrap into [lower, upper)
// instead of being clamped.
struct Box {
  Eigen::VectorXd lower, upper;
  std::vector<bool> periodic;

  Box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  void project(Eigen::VectorXd& x) const;
  Eigen::Index dim() const { return lower.size(); }
};

struct NelderMeadOptions {
  double ftol = 1e-9;
  double xtol = 1e-9;
  int max_evaluations = 5000;
  // Initial simplex edge as a fraction of each box width.
  double initial_step = 0.1;
  // Fresh simplices built around the incumbent after convergence.
  int restarts = 1;
};

struct OptimResult {
  Eigen::VectorXd x;
  double f = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Minimizes f over the box. Non-finite values are treated as +inf.
OptimResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const Box& box,
                        const NelderMeadOptions& options = {});

}  // namespace torusfit

#endif  // TORUSFIT_OPTIMIZE_HPP

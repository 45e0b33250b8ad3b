#ifndef TORUSFIT_BASELINES_HPP
#define TORUSFIT_BASELINES_HPP

#include "torusfit/model.hpp"

namespace torusfit {

// Unnormalized density at (theta1, theta2).
//   vm_sine:   exp(k1 cos d1 + k2 cos d2 + lambda sin d1 sin d2)
//   vm_cosine: exp(k1 cos d1 + k2 cos d2 - k3 cos(d1 - d2))
//   wrapped Cauchy (Kato-Pewsey): 1 / (c0 - c1 cos d1 - c2 cos d2 - c3 cos d1 cos d2 - c4 sin d1 sin d2)
// with d_i = theta_i - mu_i.
double baseline_kernel(const BaselineParams& params, double theta1, double theta2);

// Grid pmf. `sector` integrates the kernel over each cell
// [2 pi (k - 1/2)/m, 2 pi (k + 1/2)/m) with Gauss-Legendre nodes; `point`
// evaluates it at the grid angles. Both renormalize over the grid.
PmfTable discretize(const BaselineParams& params, const TorusGrid& grid,
                    Discretization how = Discretization::sector);

// (mu1, mu2, kappa1, kappa2, assoc)
Eigen::VectorXd baseline_vector(const BaselineParams& params);
BaselineParams baseline_from_vector(Family model, const Eigen::VectorXd& x);
// mu periodic on [0, 2 pi); kappa in [0, 50] (wrapped Cauchy: [0, 1 - eps]);
// assoc in [-50, 50] (wrapped Cauchy: [-1 + eps, 1 - eps]).
Box baseline_box(Family model, double eps = 1e-6);

double baseline_loglik(const CountTable& data, const BaselineParams& params,
                       Discretization how = Discretization::sector);

FitResult fit_baseline(const CountTable& data, Family model, const FitOptions& options = {});

}  // namespace torusfit

#endif  // TORUSFIT_BASELINES_HPP

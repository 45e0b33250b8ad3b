#ifndef TORUSFIT_INFERENCE_HPP
#define TORUSFIT_INFERENCE_HPP

#include <string>
#include <vector>

#include "torusfit/model.hpp"

namespace torusfit {

// sum counts * ln pmf. Returns -inf when an observed cell has zero mass;
// `diagnostic` (if given) then names the cell.
double log_likelihood(const CountTable& data, const PmfTable& model, std::string* diagnostic = nullptr);
double log_likelihood(const CountTable& data, const BwgParams& params, std::string* diagnostic = nullptr);
double log_likelihood(const CountTable& data, const BgwgParams& params, std::string* diagnostic = nullptr);

// 6 for BWG/BGWG, 5 for the baselines.
int parameter_count(Family f);
// 2 P - 2 loglik
double aic(int num_params, double loglik);
double aic(const FitResult& fit);

// Two-step MLE: every (delta, alpha, beta) branch, then (q, s, rho) by simplex.
FitResult fit_bwg(const CountTable& data, const FitOptions& options = {});
// Per delta, multi-start simplex over (alpha, beta, q, s, rho).
FitResult fit_bgwg(const CountTable& data, const FitOptions& options = {});

// Names of the continuous parameters, in the order used by the Hessian.
std::vector<std::string> continuous_names(Family f);
Eigen::VectorXd continuous_vector(const FittedParams& params);
// Log-likelihood as a function of the continuous parameters, discrete ones held at `fit`.
Objective continuous_loglik(const CountTable& data, const FitResult& fit);
Box continuous_box(const FitResult& fit, double eps = 1e-6);

struct StandardErrors {
  std::map<std::string, double> se;
  bool pseudo_inverse = false;
  std::vector<std::string> at_boundary;
};

// Square roots of diag(inverse numeric Hessian of -loglik) over the
// continuous parameters; central differences with step 1e-4 max(1, |x|).
StandardErrors standard_errors(const CountTable& data, const FitResult& fit, double eps = 1e-6);
// Same, from an explicit objective (exposed for tests with engineered Hessians).
StandardErrors standard_errors(const Objective& loglik, const Eigen::VectorXd& at, const Box& box,
                               const std::vector<std::string>& names);

// Resultant-length matched WSG concentration: q with E cos(X - alpha) = r.
double concentration_from_resultant(double r, int m, double eps = 1e-6);

}  // namespace torusfit

#endif  // TORUSFIT_INFERENCE_HPP

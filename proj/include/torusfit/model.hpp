#ifndef TORUSFIT_MODEL_HPP
#define TORUSFIT_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "torusfit/distributions.hpp"
#include "torusfit/optimize.hpp"

namespace torusfit {

enum class Family { bwg, bgwg, wrapped_cauchy, vm_sine, vm_cosine };

// How a continuous baseline density becomes a grid pmf.
enum class Discretization { sector, point };
std::string_view discretization_name(Discretization d);
Discretization discretization_from_name(std::string_view name);

// CLI spellings: bwg, bgwg, wc, vms, vmc.
std::string_view family_name(Family f);
Family family_from_name(std::string_view name);
bool is_baseline(Family f);

// Observed bivariate counts, counts(k, l) with k indexing X1.
struct CountTable {
  TorusGrid grid;
  Eigen::MatrixXi counts;
  long n = 0;

  CountTable() = default;
  explicit CountTable(Eigen::MatrixXi c);
  void validate() const;
};

// Continuous competitor parameters. `assoc` is lambda (sine), kappa3
// (cosine) or the wrapped-Cauchy rho; for wrapped Cauchy kappa1, kappa2
// hold the two concentrations in [0, 1).
struct BaselineParams {
  Family model = Family::vm_sine;
  double mu1 = 0, mu2 = 0;
  double kappa1 = 0, kappa2 = 0;
  double assoc = 0;

  void validate() const;
};

using FittedParams = std::variant<BwgParams, BgwgParams, BaselineParams>;

// One discrete branch examined by a fit.
struct DiscreteCandidate {
  Delta delta = Delta::positive;
  std::optional<int> alpha, beta;  // BWG only
  double loglik = 0;
};

struct FitResult {
  Family family = Family::bwg;
  FittedParams params;
  double loglik = 0;
  double aic = 0;
  int num_params = 6;
  std::map<std::string, double> std_errors;
  // Hessian was not positive definite; SEs come from the pseudo-inverse.
  bool se_pseudo_inverse = false;
  // Continuous parameters sitting within a step of their box edge.
  std::vector<std::string> at_boundary;
  std::vector<DiscreteCandidate> discrete_search;
  bool converged = false;
  long evaluations = 0;
  std::vector<std::string> diagnostics;
  Discretization discretization = Discretization::sector;  // baselines only
};

struct FitOptions {
  // Multi-start count per discrete branch; 0 picks the family default.
  int starts = 0;
  std::uint64_t seed = 0;
  double eps = 1e-4;
  NelderMeadOptions optimizer{};
  bool standard_errors = true;
  Discretization discretization = Discretization::sector;
};

}  // namespace torusfit

#endif  // TORUSFIT_MODEL_HPP

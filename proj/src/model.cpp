#include "torusfit/model.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace torusfit {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::bwg: return "bwg";
    case Family::bgwg: return "bgwg";
    case Family::wrapped_cauchy: return "wc";
    case Family::vm_sine: return "vms";
    case Family::vm_cosine: return "vmc";
  }
  return "?";
}

Family family_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "bwg") return Family::bwg;
  if (n == "bgwg") return Family::bgwg;
  if (n == "wc" || n == "wrapped_cauchy") return Family::wrapped_cauchy;
  if (n == "vms" || n == "vm_sine") return Family::vm_sine;
  if (n == "vmc" || n == "vm_cosine") return Family::vm_cosine;
  throw DomainError("unknown family '" + std::string(name) + "' (expected bwg, bgwg, wc, vms or vmc)");
}

bool is_baseline(Family f) { return f != Family::bwg && f != Family::bgwg; }

std::string_view discretization_name(Discretization d) { return d == Discretization::sector ? "sector" : "point"; }

Discretization discretization_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "sector") return Discretization::sector;
  if (n == "point") return Discretization::point;
  throw DomainError("unknown discretization '" + std::string(name) + "' (expected sector or point)");
}

CountTable::CountTable(Eigen::MatrixXi c) : counts(std::move(c)) {
  if (counts.rows() < 1 || counts.cols() < 1) throw DomainError("count table must be non-empty");
  grid = TorusGrid(int(counts.rows()), int(counts.cols()));
  if ((counts.array() < 0).any()) throw DomainError("counts must be non-negative");
  n = counts.cast<long>().sum();
}

void CountTable::validate() const {
  if (counts.rows() != grid.m1 || counts.cols() != grid.m2) throw DomainError("count table shape differs from grid");
  if ((counts.array() < 0).any()) throw DomainError("counts must be non-negative");
  if (n != counts.cast<long>().sum()) throw DomainError("count total is stale");
  if (n < 1) throw DomainError("count table holds no observations");
}

void BaselineParams::validate() const {
  if (!is_baseline(model)) throw DomainError("baseline parameters need a baseline family");
  for (double v : {mu1, mu2, kappa1, kappa2, assoc})
    if (!std::isfinite(v)) throw DomainError("baseline parameters must be finite");
  if (kappa1 < 0 || kappa2 < 0) throw DomainError("concentrations must be non-negative");
  if (model == Family::wrapped_cauchy) {
    if (kappa1 >= 1 || kappa2 >= 1) throw DomainError("wrapped Cauchy concentrations must lie in [0, 1)");
    if (!(std::abs(assoc) < 1)) throw DomainError("wrapped Cauchy association must satisfy |rho| < 1");
  }
}

}  // namespace torusfit

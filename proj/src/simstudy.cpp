#include "torusfit/simstudy.hpp"

#include <cmath>

#include "torusfit/inference.hpp"
#include "torusfit/parallel.hpp"

namespace torusfit {
namespace {

struct Estimate {
  std::map<std::string, double> cont;
  std::map<std::string, int> disc;
};

Estimate estimate_of(const FitResult& f) {
  Estimate e;
  if (const auto* p = std::get_if<BwgParams>(&f.params)) {
    e.cont = {{"q", p->q}, {"s", p->s}, {"rho", p->rho}};
    e.disc = {{"alpha", p->alpha}, {"beta", p->beta}, {"delta", sign(p->delta)}};
  } else {
    const auto& b = std::get<BgwgParams>(f.params);
    e.cont = {{"q", b.q}, {"s", b.s}, {"rho", b.rho}, {"alpha", b.alpha}, {"beta", b.beta}};
    e.disc = {{"delta", sign(b.delta)}};
  }
  return e;
}

std::map<std::string, double> truth_of(const ModelParams& t) {
  if (const auto* p = std::get_if<BwgParams>(&t)) return {{"q", p->q}, {"s", p->s}, {"rho", p->rho}};
  const auto& b = std::get<BgwgParams>(t);
  return {{"q", b.q}, {"s", b.s}, {"rho", b.rho}, {"alpha", b.alpha}, {"beta", b.beta}};
}

// Circular distance for wrapped locations, plain difference otherwise.
double error_of(const std::string& name, double est, double truth, const TorusGrid& g) {
  double d = est - truth;
  if (name == "alpha" || name == "beta") {
    const double m = name == "alpha" ? g.m1 : g.m2;
    d = std::remainder(d, m);
  }
  return d;
}

}  // namespace

std::vector<SimulationRow> run_simulation_study(const SimulationConfig& config) {
  if (config.replicates < 1) throw DomainError("replicate count must be >= 1");
  const bool bwg = std::holds_alternative<BwgParams>(config.truth);
  const TorusGrid grid = bwg ? std::get<BwgParams>(config.truth).grid : std::get<BgwgParams>(config.truth).grid;
  std::visit([](const auto& p) { p.validate(); }, config.truth);
  FitOptions opts = config.fit;
  opts.standard_errors = false;
  const auto truth = truth_of(config.truth);

  std::vector<SimulationRow> rows;
  for (std::size_t si = 0; si < config.sample_sizes.size(); ++si) {
    const int n = config.sample_sizes[si];
    if (n < 1) throw DomainError("sample sizes must be >= 1");
    std::vector<Estimate> est(config.replicates);
    parallel_for(est.size(), [&](std::size_t r) {
      const std::uint64_t seed = derive_seed(config.seed, (std::uint64_t(si) << 32) + r);
      const SampleBatch batch = std::visit([&](const auto& p) { return sample_joint(p, n, seed); }, config.truth);
      const CountTable data(tally(grid, batch.pairs));
      est[r] = estimate_of(bwg ? fit_bwg(data, opts) : fit_bgwg(data, opts));
    });

    SimulationRow row;
    row.n = n;
    row.replicates = config.replicates;
    const double reps = config.replicates;
    for (const auto& [name, t] : truth) {
      ParameterSummary s;
      s.truth = t;
      for (const auto& e : est) {
        s.mean += e.cont.at(name) / reps;
        s.mean_abs_error += std::abs(error_of(name, e.cont.at(name), t, grid)) / reps;
      }
      double ss = 0;
      for (const auto& e : est) ss += (e.cont.at(name) - s.mean) * (e.cont.at(name) - s.mean);
      s.sd = config.replicates > 1 ? std::sqrt(ss / (reps - 1)) : 0.0;
      row.continuous[name] = s;
    }
    for (const auto& e : est)
      for (const auto& [name, v] : e.disc) ++row.discrete[name][v];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace torusfit

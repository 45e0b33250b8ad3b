#include "torusfit/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace torusfit {
namespace {

constexpr double kPmfSumTol = 1e-10;

struct Cdf {
  std::vector<double> cum;
  int last_positive = 0;
};

Cdf build_cdf(const Eigen::VectorXd& pmf) {
  if (pmf.size() == 0) throw DomainError("empty probability vector");
  Cdf c;
  c.cum.resize(pmf.size());
  double run = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    if (!(pmf(i) >= 0.0) || !std::isfinite(pmf(i))) throw DomainError("probabilities must be finite and >= 0");
    run += pmf(i);
    c.cum[i] = run;
    if (pmf(i) > 0.0) c.last_positive = int(i);
  }
  if (std::abs(run - 1.0) > kPmfSumTol) throw DomainError("probabilities must sum to 1");
  return c;
}

int draw(const Cdf& c, double u) {
  const auto it = std::upper_bound(c.cum.begin(), c.cum.end(), u);
  const int idx = int(it - c.cum.begin());
  // u beyond the last cumulative value (rounding): clamp to the last cell with mass
  return std::min(idx, c.last_positive);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<int> sample_univariate(const Eigen::VectorXd& pmf, std::size_t n, Rng& rng) {
  const Cdf c = build_cdf(pmf);
  std::vector<int> out(n);
  for (auto& x : out) x = draw(c, rng.uniform());
  return out;
}

SampleBatch sample_joint(const BwgParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const Cdf marg = build_cdf(marginal_pmf(params, Axis::first));
  std::vector<Cdf> cond(params.grid.m1);
  std::vector<bool> ready(params.grid.m1, false);
  SampleBatch batch{{}, seed, params};
  batch.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = draw(marg, rng.uniform());
    if (!ready[k]) {
      cond[k] = build_cdf(conditional_pmf(params, Axis::first, k));
      ready[k] = true;
    }
    batch.pairs.push_back({k, draw(cond[k], rng.uniform())});
  }
  return batch;
}

SampleBatch sample_joint(const BgwgParams& params, std::size_t n, std::uint64_t seed) {
  const PmfTable t = pmf_table(params);
  const Eigen::VectorXd marginal = t.marginal(Axis::first);
  Rng rng(seed);
  const Cdf marg = build_cdf(marginal);
  std::vector<Cdf> cond;
  cond.reserve(params.grid.m1);
  for (int k = 0; k < params.grid.m1; ++k) {
    Eigen::VectorXd row = t.p.row(k).transpose();
    cond.push_back(build_cdf(row / row.sum()));
  }
  SampleBatch batch{{}, seed, params};
  batch.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = draw(marg, rng.uniform());
    batch.pairs.push_back({k, draw(cond[k], rng.uniform())});
  }
  return batch;
}

std::vector<GridPoint> sample_categorical(const PmfTable& table, std::size_t n, std::uint64_t seed) {
  const int m2 = table.grid.m2;
  Eigen::VectorXd flat(table.grid.cells());
  for (int k = 0; k < table.grid.m1; ++k)
    for (int l = 0; l < m2; ++l) flat(k * m2 + l) = table.p(k, l);
  Rng rng(seed);
  const std::vector<int> idx = sample_univariate(flat, n, rng);
  std::vector<GridPoint> out;
  out.reserve(n);
  for (int f : idx) out.push_back({f / m2, f % m2});
  return out;
}

Eigen::MatrixXi tally(const TorusGrid& grid, const std::vector<GridPoint>& pairs) {
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(grid.m1, grid.m2);
  for (const auto& p : pairs) {
    if (!grid.contains(p.k, p.l)) throw DomainError("sampled point off the grid");
    ++counts(p.k, p.l);
  }
  return counts;
}

}  // namespace torusfit

#ifndef TORUSFIT_SAMPLING_HPP
#define TORUSFIT_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "torusfit/distributions.hpp"

namespace torusfit {

// mt19937_64 with a stable uniform mapping: the top 53 bits of each draw
// scaled by 2^-53. std::uniform_real_distribution is avoided on purpose,
// its output is implementation defined.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/53bit-uniform";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer of (seed, stream): independent sub-seeds per replicate.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

using ModelParams = std::variant<BwgParams, BgwgParams>;

struct SampleBatch {
  std::vector<GridPoint> pairs;
  std::uint64_t seed = 0;
  ModelParams params;
};

// Inverse-CDF draws; exactly n uniforms are consumed.
std::vector<int> sample_univariate(const Eigen::VectorXd& pmf, std::size_t n, Rng& rng);

// X1 from its marginal, then X2 from the conditional given X1.
SampleBatch sample_joint(const BwgParams& params, std::size_t n, std::uint64_t seed);
SampleBatch sample_joint(const BgwgParams& params, std::size_t n, std::uint64_t seed);

// Direct categorical draws from the flattened table; cross-check path only.
std::vector<GridPoint> sample_categorical(const PmfTable& table, std::size_t n, std::uint64_t seed);

// Tally of sampled pairs on the grid.
Eigen::MatrixXi tally(const TorusGrid& grid, const std::vector<GridPoint>& pairs);

}  // namespace torusfit

#endif  // TORUSFIT_SAMPLING_HPP

#ifndef TORUSFIT_TESTS_SUPPORT_HPP
#define TORUSFIT_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <random>
#include <string>

#include "torusfit/distributions.hpp"

namespace testsupport {

// Parameter draws for the property tests. Fixed seeds keep failures reproducible.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : g_(seed) {}

  double unif(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  torusfit::Delta delta() { return integer(0, 1) ? torusfit::Delta::positive : torusfit::Delta::negative; }

  torusfit::BwgParams bwg(int mlo = 1, int mhi = 12, double rlo = -1, double rhi = 1) {
    torusfit::BwgParams p;
    p.grid = torusfit::TorusGrid(integer(mlo, mhi), integer(mlo, mhi));
    p.alpha = integer(0, p.grid.m1 - 1);
    p.beta = integer(0, p.grid.m2 - 1);
    p.q = unif(0.02, 0.98);
    p.s = unif(0.02, 0.98);
    p.rho = unif(rlo, rhi);
    p.delta = delta();
    return p;
  }

  torusfit::BgwgParams bgwg(int mlo = 1, int mhi = 12, double rlo = -1, double rhi = 1) {
    torusfit::BgwgParams p;
    p.grid = torusfit::TorusGrid(integer(mlo, mhi), integer(mlo, mhi));
    p.alpha = unif(0, p.grid.m1);
    p.beta = unif(0, p.grid.m2);
    if (p.alpha >= p.grid.m1) p.alpha = 0;
    if (p.beta >= p.grid.m2) p.beta = 0;
    p.q = unif(0.02, 0.98);
    p.s = unif(0.02, 0.98);
    p.rho = unif(rlo, rhi);
    p.delta = delta();
    return p;
  }

 private:
  std::mt19937_64 g_;
};

inline std::string fixtures_dir() {
  const char* d = std::getenv("TORUSFIT_FIXTURES");
  return d ? d : "fixtures";
}

}  // namespace testsupport

#endif

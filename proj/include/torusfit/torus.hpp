#ifndef TORUSFIT_TORUS_HPP
#define TORUSFIT_TORUS_HPP

#include <array>
#include <cmath>
#include <compare>
#include <numbers>
#include <string>
#include <string_view>

#include "torusfit/errors.hpp"

namespace torusfit {

// Sample space D_{m1} x D_{m2}: m1*m2 equally spaced direction pairs.
struct TorusGrid {
  int m1 = 1;
  int m2 = 1;

  TorusGrid() = default;
  TorusGrid(int m1_, int m2_) : m1(m1_), m2(m2_) {
    if (m1 < 1 || m2 < 1) throw DomainError("grid sizes must be >= 1");
  }

  int cells() const noexcept { return m1 * m2; }
  bool contains(int k, int l) const noexcept { return k >= 0 && k < m1 && l >= 0 && l < m2; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

struct GridPoint {
  int k = 0;
  int l = 0;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Maps any integer onto Z_m (non-negative remainder).
constexpr int wrap_index(long long k, int m) noexcept {
  const long long r = k % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

// 2*pi*k/m for k in Z_m.
double angle_of(int k, int m);

// Wrapped offset (k - alpha) mod m in [0, m).
template <typename Scalar>
Scalar zeta(int k, Scalar alpha, int m) {
  if (m < 1) throw DomainError("grid size must be >= 1");
  if (!(alpha >= Scalar(0) && alpha < Scalar(m))) throw DomainError("location outside [0, m)");
  if (k < 0 || k >= m) throw DomainError("grid index out of range");
  Scalar z = Scalar(k) - alpha;
  if (z < Scalar(0)) z += Scalar(m);
  // k - alpha in (-m, m) so one correction suffices; guard the rounding edge z == m.
  if (z >= Scalar(m)) z -= Scalar(m);
  return z;
}

// 16-point compass rose, N = 0 increasing clockwise to NNW = 15.
namespace compass {

inline constexpr std::array<std::string_view, 16> kLabels = {
    "N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
    "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"};

// Case-insensitive; throws ParseError naming the token.
int index_of(std::string_view label);
std::string_view label_of(int index);

}  // namespace compass

inline int compass_to_index(std::string_view label) { return compass::index_of(label); }

}  // namespace torusfit

#endif  // TORUSFIT_TORUS_HPP

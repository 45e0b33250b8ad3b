#include "torusfit/torus.hpp"

#include <algorithm>
#include <cctype>

namespace torusfit {

double angle_of(int k, int m) {
  if (m < 1) throw DomainError("grid size must be >= 1");
  if (k < 0 || k >= m) throw DomainError("grid index " + std::to_string(k) + " outside Z_" + std::to_string(m));
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
}

namespace compass {

int index_of(std::string_view label) {
  std::string upper(label);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    if (kLabels[i] == upper) return static_cast<int>(i);
  }
  throw ParseError("unknown compass label '" + std::string(label) + "'");
}

std::string_view label_of(int index) {
  if (index < 0 || index >= static_cast<int>(kLabels.size())) throw DomainError("compass index out of range");
  return kLabels[static_cast<std::size_t>(index)];
}

}  // namespace compass
}  // namespace torusfit

#include "torusfit/fixtures.hpp"

#include <array>
#include <string>

namespace torusfit {
namespace {

// Rows are X2 = 15 down to 0 top-down; columns are X1 = 0..15.
using Layout = std::array<std::array<int, 16>, 16>;

constexpr Layout kDataset1 = {{
    { 0,  1,  0,  0,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  1,  3},  // x2 = 15
    { 2,  0,  3,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  1,  0},  // x2 = 14
    { 1,  1,  2,  2,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  2,  3},  // x2 = 13
    { 0,  1,  2,  2,  2,  1,  0,  0,  0,  0,  0,  0,  1,  1,  2,  0},  // x2 = 12
    { 1,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  0},  // x2 = 11
    { 1,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 10
    { 0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 9
    { 0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 8
    { 0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  0,  0,  0,  0,  0},  // x2 = 7
    { 0,  0,  0,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 6
    { 0,  0,  0,  1,  0,  0,  0,  1,  0,  0,  1,  0,  0,  0,  0,  0},  // x2 = 5
    { 0,  0,  0,  0,  0,  1,  3,  0,  0,  0,  2,  0,  0,  4,  2,  0},  // x2 = 4
    { 0,  0,  1,  0,  0,  1,  0,  0,  1,  1,  0,  1,  1,  2,  1,  0},  // x2 = 3
    { 1,  0,  1,  0,  0,  1,  0,  0,  0,  0,  0,  1,  0,  0,  0,  1},  // x2 = 2
    { 0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  1,  1},  // x2 = 1
    { 3,  0,  2,  1,  0,  1,  0,  0,  0,  1,  0,  0,  0,  2,  1,  2},  // x2 = 0
}};

constexpr Layout kDataset2 = {{
    { 0,  1,  8,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 15
    { 1,  8,  3,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 14
    { 0,  5,  6,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 13
    { 0,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 12
    { 0,  0,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 11
    { 0,  1,  3,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 10
    { 0,  0,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 9
    { 1,  1,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 8
    { 0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 7
    { 1,  4,  0,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 6
    { 1,  2,  4,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2},  // x2 = 5
    { 2,  1,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 4
    { 2,  2,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2},  // x2 = 3
    { 5,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  4},  // x2 = 2
    { 2,  1,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 1
    { 1,  3,  5,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 0
}};

constexpr Layout kDataset3 = {{
    { 1,  2,  4,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 15
    { 2,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 14
    { 2,  2,  7,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 13
    { 3,  1,  6,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 12
    { 1,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 11
    { 0,  0,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 10
    { 0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 9
    { 0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 8
    { 0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 7
    { 0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 6
    { 1,  1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 5
    { 0,  7,  3,  3,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 4
    { 0,  6,  5,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 3
    { 0,  1,  3,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1},  // x2 = 2
    { 1,  2,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0},  // x2 = 1
    { 2,  3,  5,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2},  // x2 = 0
}};

CountTable from_layout(const Layout& t) {
  Eigen::MatrixXi c(16, 16);
  for (int row = 0; row < 16; ++row)
    for (int k = 0; k < 16; ++k) c(k, 15 - row) = t[row][k];
  return CountTable(c);
}

}  // namespace

std::vector<std::string_view> dataset_names() { return {"dataset1", "dataset2", "dataset3"}; }

CountTable dataset(std::string_view name) {
  if (name == "dataset1") return from_layout(kDataset1);
  if (name == "dataset2") return from_layout(kDataset2);
  if (name == "dataset3") return from_layout(kDataset3);
  throw DomainError("unknown dataset '" + std::string(name) + "' (expected dataset1, dataset2 or dataset3)");
}

}  // namespace torusfit

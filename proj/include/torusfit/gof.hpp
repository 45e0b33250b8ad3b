#ifndef TORUSFIT_GOF_HPP
#define TORUSFIT_GOF_HPP

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "torusfit/model.hpp"

namespace torusfit {

// Row-major flattening: cell (k, l) goes to k * m2 + l.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> flatten_row_major(const Eigen::MatrixBase<Derived>& a) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> v(a.size());
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    for (Eigen::Index l = 0; l < a.cols(); ++l) v(k * a.cols() + l) = a(k, l);
  return v;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unflatten_row_major(
    const Eigen::MatrixBase<Derived>& v, Eigen::Index m1, Eigen::Index m2) {
  if (v.size() != m1 * m2) throw DomainError("flat length does not match m1 * m2");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> a(m1, m2);
  for (Eigen::Index k = 0; k < m1; ++k)
    for (Eigen::Index l = 0; l < m2; ++l) a(k, l) = v(k * m2 + l);
  return a;
}

// Consecutive flat cells first..last, 1-based and inclusive ("14:17").
struct GroupRange {
  int first = 1;
  int last = 1;
  friend bool operator==(const GroupRange&, const GroupRange&) = default;
};

// "1:13 14:17 ..." (whitespace or comma separated; "7" alone is 7:7).
std::vector<GroupRange> parse_groups(std::string_view text);
std::string format_groups(const std::vector<GroupRange>& groups);
// Throws unless the ranges tile 1..cells in order.
void check_partition(const std::vector<GroupRange>& groups, int cells);

// Reference hand-merged groupings: dataset1, dataset2, dataset3.
std::vector<GroupRange> preset_groups(std::string_view name);

struct GofReport {
  std::vector<GroupRange> groups;
  std::vector<double> expected;
  std::vector<long> observed;
  double x2 = 0;
  int df = 0;
  double critical = 0;  // upper quantile at `level`
  double level = 0.05;
  double p_value = 1;
};

GofReport chisq_gof(const CountTable& data, const PmfTable& model, const std::vector<GroupRange>& groups,
                    int fitted_params, double level = 0.05);

// Greedy left-to-right merging until each group reaches `min_expected`;
// a short tail joins the previous group.
std::vector<GroupRange> auto_merge_groups(const Eigen::VectorXd& expected_flat, double min_expected = 5.0,
                                          double min_floor = 1.0);

// Q(df/2, x/2)
double chi_square_sf(double x, int df);
double chi_square_quantile_upper(double level, int df);

}  // namespace torusfit

#endif  // TORUSFIT_GOF_HPP

#include "torusfit/gof.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace torusfit {
namespace {

int parse_int(std::string_view s, std::string_view token) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad group token '" + std::string(token) + "'");
  return v;
}

}  // namespace

std::vector<GroupRange> parse_groups(std::string_view text) {
  std::vector<GroupRange> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace((unsigned char)text[i]) || text[i] == ',')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace((unsigned char)text[j]) && text[j] != ',') ++j;
    const std::string_view tok = text.substr(i, j - i);
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
      const int v = parse_int(tok, tok);
      out.push_back({v, v});
    } else {
      const int a = parse_int(tok.substr(0, colon), tok), b = parse_int(tok.substr(colon + 1), tok);
      if (b < a) throw ParseError("group '" + std::string(tok) + "' runs backwards");
      out.push_back({a, b});
    }
    i = j;
  }
  if (out.empty()) throw ParseError("no groups given");
  return out;
}

std::string format_groups(const std::vector<GroupRange>& groups) {
  std::ostringstream os;
  for (std::size_t i = 0; i < groups.size(); ++i) os << (i ? " " : "") << groups[i].first << ':' << groups[i].last;
  return os.str();
}

void check_partition(const std::vector<GroupRange>& groups, int cells) {
  int next = 1;
  for (const auto& g : groups) {
    if (g.first != next || g.last < g.first)
      throw DomainError("groups must tile the flat cells in order; problem at " + std::to_string(g.first) + ":" +
                        std::to_string(g.last));
    next = g.last + 1;
  }
  if (next != cells + 1) throw DomainError("groups do not cover all " + std::to_string(cells) + " cells");
}

std::vector<GroupRange> preset_groups(std::string_view name) {
  if (name == "dataset1")
    return parse_groups("1:13 14:17 18:31 32:45 46:60 61:77 78:100 101:125 126:150 151:175 176:192 193:207 "
                        "208:212 213:225 226:240 241:256");
  if (name == "dataset2")
    return parse_groups("1:6 7:17 18:19 20:21 22:23 24:27 28:30 31:32 33:34 35:38 39:43 44:46 47:48 49:64 65:256");
  if (name == "dataset3")
    return parse_groups("1:14 15:17 18:20 21:27 28:30 31:32 33:34 35:36 37:38 39:45 46:47 48:50 51:57 58:75 76:256");
  throw DomainError("unknown group preset '" + std::string(name) + "' (expected dataset1, dataset2 or dataset3)");
}

GofReport chisq_gof(const CountTable& data, const PmfTable& model, const std::vector<GroupRange>& groups,
                    int fitted_params, double level) {
  data.validate();
  if (!(data.grid == model.grid)) throw DomainError("data and model grids differ");
  const int cells = data.grid.cells();
  check_partition(groups, cells);
  const Eigen::VectorXd p = flatten_row_major(model.p);
  const Eigen::VectorXi o = flatten_row_major(data.counts);
  GofReport r;
  r.groups = groups;
  r.level = level;
  for (const auto& g : groups) {
    double e = 0;
    long obs = 0;
    for (int c = g.first - 1; c < g.last; ++c) {
      e += p(c);
      obs += o(c);
    }
    e *= double(data.n);
    if (!(e > 0)) throw DomainError("group " + std::to_string(g.first) + ":" + std::to_string(g.last) +
                                    " has zero expected frequency");
    r.expected.push_back(e);
    r.observed.push_back(obs);
    r.x2 += (obs - e) * (obs - e) / e;
  }
  r.df = int(groups.size()) - 1 - fitted_params;
  if (r.df < 1) throw DomainError("too few groups for the fitted parameter count (df < 1)");
  r.p_value = chi_square_sf(r.x2, r.df);
  r.critical = chi_square_quantile_upper(level, r.df);
  return r;
}

std::vector<GroupRange> auto_merge_groups(const Eigen::VectorXd& e, double min_expected, double min_floor) {
  if (e.size() == 0 || !(e.sum() > 0)) throw DomainError("expected frequencies must have a positive total");
  std::vector<GroupRange> out;
  std::vector<double> mass;
  int start = 1;
  double acc = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    acc += e(i);
    if (acc >= min_expected) {
      out.push_back({start, int(i) + 1});
      mass.push_back(acc);
      start = int(i) + 2;
      acc = 0;
    }
  }
  if (start <= e.size()) {
    if (out.empty()) throw DomainError("total expected frequency too small to form two groups");
    out.back().last = int(e.size());
    mass.back() += acc;
  }
  if (out.size() < 2) throw DomainError("total expected frequency too small to form two groups");
  const auto big = std::count_if(mass.begin(), mass.end(), [&](double m) { return m >= min_expected; });
  const bool floor_ok = std::all_of(mass.begin(), mass.end(), [&](double m) { return m >= min_floor; });
  if (!floor_ok || big * 5 < long(mass.size()) * 4) throw DomainError("merging rule could not be satisfied");
  return out;
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw DomainError("degrees of freedom must be >= 1");
  if (!(x >= 0)) throw DomainError("chi-square statistic must be >= 0");
  if (x == 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chi_square_quantile_upper(double level, int df) {
  if (df < 1) throw DomainError("degrees of freedom must be >= 1");
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), level));
}

}  // namespace torusfit

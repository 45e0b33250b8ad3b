#include "torusfit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "torusfit/baselines.hpp"
#include "torusfit/inference.hpp"

namespace torusfit {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool to_long(const std::string& s, long& v) {
  if (s.empty()) return false;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CountTable read_count_table(std::istream& in, int m1, int m2) {
  std::string line;
  int lineno = 0;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> linenos;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    rows.push_back(split_csv(line));
    linenos.push_back(lineno);
  }
  if (rows.empty()) throw ParseError("empty count table");
  const auto& header = rows[0];
  const int cols = int(header.size()) - 1;
  if (cols < 1) throw ParseError("header has no X1 labels", linenos[0]);
  if (m1 == 0) m1 = cols;
  if (m2 == 0) m2 = int(rows.size()) - 1;
  if (cols != m1) throw ParseError("header has " + std::to_string(cols) + " X1 labels, expected " + std::to_string(m1), linenos[0]);
  for (int k = 0; k < m1; ++k) {
    long v;
    if (!to_long(header[k + 1], v) || v != k)
      throw ParseError("header label '" + header[k + 1] + "' should be " + std::to_string(k), linenos[0]);
  }
  if (int(rows.size()) - 1 != m2)
    throw ParseError("expected " + std::to_string(m2) + " data rows, found " + std::to_string(rows.size() - 1),
                     linenos.back());
  Eigen::MatrixXi counts(m1, m2);
  for (int r = 1; r <= m2; ++r) {
    const auto& row = rows[r];
    const int ln = linenos[r];
    if (int(row.size()) != m1 + 1)
      throw ParseError("row has " + std::to_string(row.size() - 1) + " cells, expected " + std::to_string(m1), ln);
    long label;
    const int expect = m2 - r;
    if (!to_long(row[0], label) || label != expect)
      throw ParseError("row label '" + row[0] + "' should be " + std::to_string(expect), ln);
    for (int k = 0; k < m1; ++k) {
      long v;
      if (!to_long(row[k + 1], v) || v < 0 || v > std::numeric_limits<int>::max())
        throw ParseError("cell '" + row[k + 1] + "' is not a non-negative integer", ln);
      counts(k, expect) = int(v);
    }
  }
  CountTable t(counts);
  if (t.n < 1) throw DomainError("count table holds no observations");
  return t;
}

CountTable parse_count_table(const std::filesystem::path& path, int m1, int m2) {
  auto in = open_in(path);
  return read_count_table(in, m1, m2);
}

void write_count_table(std::ostream& out, const CountTable& t) {
  out << "x2\\x1";
  for (int k = 0; k < t.grid.m1; ++k) out << ',' << k;
  out << '\n';
  for (int l = t.grid.m2 - 1; l >= 0; --l) {
    out << l;
    for (int k = 0; k < t.grid.m1; ++k) out << ',' << t.counts(k, l);
    out << '\n';
  }
}

namespace {

// Compass label or integer index on the 16-point rose.
int direction_index(const std::string& tok, int line) {
  long v;
  if (to_long(tok, v)) {
    if (v < 0 || v > 15) throw ParseError("direction index " + tok + " outside 0..15", line);
    return int(v);
  }
  try {
    return compass::index_of(tok);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace

ObservationTally read_observations(std::istream& in) {
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(16, 16);
  long calm = 0;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split_csv(line);
    if (first && cols.size() == 2 && lower(cols[0]) == "x1" && lower(cols[1]) == "x2") {
      first = false;
      continue;
    }
    first = false;
    if (cols.size() != 2) throw ParseError("expected two columns", lineno);
    if (lower(cols[0]) == "calm" || lower(cols[1]) == "calm") {
      ++calm;
      continue;
    }
    ++counts(direction_index(cols[0], lineno), direction_index(cols[1], lineno));
  }
  if (counts.sum() == 0) throw DomainError("no usable observations");
  return {CountTable(counts), calm};
}

ObservationTally parse_observations(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_observations(in);
}

void emit_heatmap(std::ostream& out, const Eigen::MatrixXd& v) {
  out << "k,l,value\n";
  for (Eigen::Index k = 0; k < v.rows(); ++k)
    for (Eigen::Index l = 0; l < v.cols(); ++l) out << k << ',' << l << ',' << format_number(v(k, l)) << '\n';
}

void emit_heatmap(const std::filesystem::path& path, const Eigen::MatrixXd& v) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  emit_heatmap(out, v);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Eigen::MatrixXd read_heatmap(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::tuple<long, long, double>> cells;
  long m1 = 0, m2 = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split_csv(line);
    if (lineno == 1 && cols.size() == 3 && cols[0] == "k") continue;
    long k, l;
    if (cols.size() != 3 || !to_long(cols[0], k) || !to_long(cols[1], l) || k < 0 || l < 0)
      throw ParseError("expected k,l,value", lineno);
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(cols[2], &used);
      if (used != cols[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad value '" + cols[2] + "'", lineno);
    }
    cells.emplace_back(k, l, v);
    m1 = std::max(m1, k + 1);
    m2 = std::max(m2, l + 1);
  }
  if (long(cells.size()) != m1 * m2) throw ParseError("heatmap does not cover a full grid");
  Eigen::MatrixXd out(m1, m2);
  for (const auto& [k, l, v] : cells) out(k, l) = v;
  return out;
}

nlohmann::json to_json(const FittedParams& params) {
  nlohmann::json j;
  if (const auto* p = std::get_if<BwgParams>(&params)) {
    j = {{"m1", p->grid.m1}, {"m2", p->grid.m2}, {"alpha", p->alpha}, {"beta", p->beta},
         {"q", p->q},        {"s", p->s},        {"rho", p->rho},     {"delta", sign(p->delta)}};
  } else if (const auto* p = std::get_if<BgwgParams>(&params)) {
    j = {{"m1", p->grid.m1}, {"m2", p->grid.m2}, {"alpha", p->alpha}, {"beta", p->beta},
         {"q", p->q},        {"s", p->s},        {"rho", p->rho},     {"delta", sign(p->delta)}};
  } else {
    const auto& b = std::get<BaselineParams>(params);
    const auto names = continuous_names(b.model);
    const Eigen::VectorXd x = baseline_vector(b);
    for (int i = 0; i < 5; ++i) j[names[i]] = x(i);
  }
  return j;
}

nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json j;
  j["family"] = std::string(family_name(fit.family));
  j["params"] = to_json(fit.params);
  j["loglik"] = fit.loglik;
  j["aic"] = fit.aic;
  j["num_params"] = fit.num_params;
  j["se"] = fit.std_errors;
  j["se_pseudo_inverse"] = fit.se_pseudo_inverse;
  j["at_boundary"] = fit.at_boundary;
  j["converged"] = fit.converged;
  j["evaluations"] = fit.evaluations;
  if (is_baseline(fit.family)) j["discretization"] = std::string(discretization_name(fit.discretization));
  nlohmann::json search = nlohmann::json::array();
  for (const auto& c : fit.discrete_search) {
    nlohmann::json e{{"delta", sign(c.delta)}, {"loglik", std::isfinite(c.loglik) ? nlohmann::json(c.loglik) : nullptr}};
    if (c.alpha) e["alpha"] = *c.alpha;
    if (c.beta) e["beta"] = *c.beta;
    search.push_back(e);
  }
  j["discrete_search"] = search;
  j["diagnostics"] = fit.diagnostics;
  return j;
}

nlohmann::json to_json(const GofReport& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t i = 0; i < r.groups.size(); ++i)
    groups.push_back({{"range", std::to_string(r.groups[i].first) + ":" + std::to_string(r.groups[i].last)},
                      {"expected", r.expected[i]},
                      {"observed", r.observed[i]}});
  return {{"groups", groups}, {"x2", r.x2},           {"df", r.df},
          {"level", r.level}, {"critical", r.critical}, {"p_value", r.p_value}};
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows) {
  out << "n,parameter,truth,mean,sd,mean_abs_error,value,count\n";
  for (const auto& row : rows) {
    for (const auto& [name, s] : row.continuous)
      out << row.n << ',' << name << ',' << format_number(s.truth) << ',' << format_number(s.mean) << ','
          << format_number(s.sd) << ',' << format_number(s.mean_abs_error) << ",,\n";
    for (const auto& [name, tally] : row.discrete)
      for (const auto& [value, count] : tally) out << row.n << ',' << name << ",,,,," << value << ',' << count << '\n';
  }
}

}  // namespace torusfit

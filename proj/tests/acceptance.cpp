// Acceptance run: one line per criterion, non-zero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "torusfit/baselines.hpp"
#include "torusfit/cli.hpp"
#include "torusfit/fixtures.hpp"
#include "torusfit/gof.hpp"
#include "torusfit/inference.hpp"
#include "torusfit/moments.hpp"
#include "torusfit/sampling.hpp"
#include "torusfit/simstudy.hpp"

using namespace torusfit;

namespace {

// Collects failures; the first few are echoed under the summary line.
struct Check {
  int checks = 0;
  std::vector<std::string> failures;

  void that(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s << what << ": got " << got << ", want " << want << " +- " << tol;
    that(std::abs(got - want) <= tol, s.str());
  }
};

struct Draws {
  std::mt19937_64 g;
  explicit Draws(std::uint64_t seed) : g(seed) {}
  double u(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
  int i(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }
  Delta d() { return i(0, 1) ? Delta::positive : Delta::negative; }
  BwgParams bwg(int lo, int hi, double rlo = -1, double rhi = 1) {
    const TorusGrid g(i(lo, hi), i(lo, hi));
    return {g, i(0, g.m1 - 1), i(0, g.m2 - 1), u(0.02, 0.98), u(0.02, 0.98), u(rlo, rhi), d()};
  }
  BgwgParams bgwg(int lo, int hi, double rlo = -1, double rhi = 1) {
    const TorusGrid g(i(lo, hi), i(lo, hi));
    BgwgParams p{g, u(0, g.m1), u(0, g.m2), u(0.02, 0.98), u(0.02, 0.98), u(rlo, rhi), d()};
    if (p.alpha >= g.m1) p.alpha = 0;
    if (p.beta >= g.m2) p.beta = 0;
    return p;
  }
};

int failed_criteria = 0, known_failures = 0;

// `known`: the claim has counterexamples, so a FAIL is reported but does not
// fail the run.
void report(int id, const std::string& title, const std::function<std::string(Check&)>& body, bool known = false) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = c.failures.empty();
  if (!ok) ++(known ? known_failures : failed_criteria);
  std::printf("criterion %d %s | %s | %d checks, %.1f s%s%s%s\n", id, ok ? "PASS" : "FAIL", title.c_str(), c.checks, secs,
              detail.empty() ? "" : " | ", detail.c_str(), !ok && known ? " | known counterexamples" : "");
  for (std::size_t i = 0; i < std::min<std::size_t>(c.failures.size(), 8); ++i)
    std::printf("    %s\n", c.failures[i].c_str());
  if (c.failures.size() > 8) std::printf("    ... %zu more\n", c.failures.size() - 8);
  std::fflush(stdout);
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

double kernel_sum(const TorusGrid& g, double a, double b, double q, double s, double r, Delta d) {
  double t = 0;
  for (int k = 0; k < g.m1; ++k)
    for (int l = 0; l < g.m2; ++l) t += torus_kernel<double>(g, a, b, q, s, r, d, k, l);
  return t;
}

std::string exactness(Check& c) {
  Draws d(101);
  double worst_norm = 0, worst_c = 0;
  for (int i = 0; i < 150; ++i) {
    const BwgParams p = d.bwg(1, 12);
    const PmfTable t = pmf_table(p);
    worst_norm = std::max(worst_norm, std::abs(t.total() - 1));
    c.that(std::abs(t.total() - 1) <= 1e-12, "BWG normalization");
    const double rel = std::abs(1 / bwg_normalizer(p) / kernel_sum(p.grid, p.alpha, p.beta, p.q, p.s, p.rho, p.delta) - 1);
    worst_c = std::max(worst_c, rel);
    c.that(rel <= 1e-11, "C1 closed vs summation");
    for (Axis ax : {Axis::first, Axis::second})
      c.that(max_abs(marginal_pmf(p, ax) - t.marginal(ax)) <= 1e-12, "marginal vs row sums");
    const Eigen::VectorXd m1 = t.marginal(Axis::first);
    const int k = d.i(0, p.grid.m1 - 1);
    c.that(max_abs(conditional_pmf(p, Axis::first, k) - t.p.row(k).transpose() / m1(k)) <= 1e-12, "conditional vs ratio");
    BwgParams z = p;
    z.rho = 0;
    const Eigen::MatrixXd outer = marginal_pmf(z, Axis::first) * marginal_pmf(z, Axis::second).transpose();
    c.that(max_abs(pmf_table(z).p - outer) <= 1e-13, "BWG rho = 0 factorization");
    BwgParams pos = p, neg = p;
    pos.delta = Delta::positive;
    neg.delta = Delta::negative;
    const PmfTable tp = pmf_table(pos), tn = pmf_table(neg);
    double gap = 0;
    for (int a = 0; a < p.grid.m1; ++a)
      for (int b = 0; b < p.grid.m2; ++b)
        gap = std::max(gap, std::abs(tn(a, wrap_index(2LL * p.beta - b, p.grid.m2)) - tp(a, b)));
    c.that(gap <= 1e-13, "delta reflection");
  }
  for (int i = 0; i < 150; ++i) {
    const BgwgParams p = d.bgwg(1, 12);
    const PmfTable t = pmf_table(p);
    worst_norm = std::max(worst_norm, std::abs(t.total() - 1));
    c.that(std::abs(t.total() - 1) <= 1e-12, "BGWG normalization");
    const double brute = kernel_sum(p.grid, p.alpha, p.beta, p.q, p.s, p.rho, p.delta);
    const double rel = std::abs(bgwg_inverse_normalizer_closed(p) / brute - 1);
    worst_c = std::max(worst_c, rel);
    c.that(rel <= 1e-11, "1/C7 closed vs summation");
    BgwgParams z = p;
    z.rho = 0;
    const PmfTable tz = pmf_table(z);
    c.that(max_abs(tz.p - tz.marginal(Axis::first) * tz.marginal(Axis::second).transpose()) <= 1e-13,
           "BGWG rho = 0 factorization");
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst |sum-1| %.1e, worst constant rel err %.1e", worst_norm, worst_c);
  return buf;
}

std::string modes(Check& c) {
  Draws d(202);
  for (int i = 0; i < 250; ++i) {
    const BwgParams p = d.bwg(1, 12, 0, 1);
    const auto m = joint_mode(p);
    c.that(m.size() == 1 && m[0].k == p.alpha && m[0].l == p.beta, "BWG unique mode at location");
  }
  int outside = 0;
  for (int i = 0; i < 250; ++i) {
    const BgwgParams p = d.bgwg(1, 12, 0, 1);
    const int a0 = int(std::floor(p.alpha)), b0 = int(std::floor(p.beta));
    const int a1 = wrap_index(a0 + 1, p.grid.m1), b1 = wrap_index(b0 + 1, p.grid.m2);
    const auto modes = joint_mode(p);
    bool in = true;
    for (const GridPoint& g : modes) in = in && (g.k == a0 || g.k == a1) && (g.l == b0 || g.l == b1);
    char buf[200];
    std::snprintf(buf, sizeof buf, "BGWG mode (%d,%d) off four-point set: m %dx%d a %.3f b %.3f q %.3f s %.3f rho %.3f delta %d",
                  modes[0].k, modes[0].l, p.grid.m1, p.grid.m2, p.alpha, p.beta, p.q, p.s, p.rho, sign(p.delta));
    outside += !in;
    c.that(in, buf);
  }
  for (int i = 0; i < 250; ++i) {
    const BwgParams p = d.bwg(1, 12, 0, 1);
    for (Axis ax : {Axis::first, Axis::second}) {
      const Eigen::VectorXd m = marginal_pmf(p, ax);
      const int n = int(m.size()), c0 = ax == Axis::first ? p.alpha : p.beta;
      bool ok = true;
      for (int t = 0; t < n / 2; ++t) {
        ok = ok && m(wrap_index(c0 + t, n)) >= m(wrap_index(c0 + t + 1, n)) - 1e-15;
        ok = ok && m(wrap_index(c0 - t, n)) >= m(wrap_index(c0 - t - 1, n)) - 1e-15;
      }
      c.that(ok, "marginal unimodal about its location");
    }
  }
  if (outside) return std::to_string(outside) + "/250 BGWG draws have a mode off the four-point set";
  return "250 draws each";
}

std::string moments(Check& c) {
  Draws d(303);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const BgwgParams p = d.bgwg(3, 16);
    const TrigMoments a = trig_moments_closed(p), b = trig_moments_brute(p);
    const double v[] = {a.e_cos1 - b.e_cos1,         a.e_cos2 - b.e_cos2,         a.e_sin1 - b.e_sin1,
                        a.e_sin2 - b.e_sin2,         a.e_cos1cos1 - b.e_cos1cos1, a.e_cos2cos2 - b.e_cos2cos2,
                        a.e_sin1sin1 - b.e_sin1sin1, a.e_sin2sin2 - b.e_sin2sin2, a.e_cos1cos2 - b.e_cos1cos2,
                        a.e_cos1sin2 - b.e_cos1sin2, a.e_sin1cos2 - b.e_sin1cos2, a.e_sin1sin2 - b.e_sin1sin2,
                        a.e_cos1sin1 - b.e_cos1sin1, a.e_cos2sin2 - b.e_cos2sin2};
    double g = 0;
    for (double x : v) g = std::max(g, std::abs(x));
    worst = std::max(worst, g);
    c.that(g <= 1e-9, "closed trigonometric moments vs summation");
  }
  for (int i = 0; i < 100; ++i) {
    BwgParams p = d.bwg(3, 16);
    p.alpha = p.beta = 0;
    p.delta = Delta::positive;
    const BwgVarCov v = bwg_varcov_closed(p);
    const TrigMoments m = trig_moments_brute(p);
    c.that(std::abs(v.var_cos1 - (m.e_cos1cos1 - m.e_cos1 * m.e_cos1)) <= 1e-9 &&
               std::abs(v.var_sin1 - m.e_sin1sin1) <= 1e-9 &&
               std::abs(v.var_cos2 - (m.e_cos2cos2 - m.e_cos2 * m.e_cos2)) <= 1e-9 &&
               std::abs(v.var_sin2 - m.e_sin2sin2) <= 1e-9 &&
               std::abs(v.cov_cos1cos2 - (m.e_cos1cos2 - m.e_cos1 * m.e_cos2)) <= 1e-9 &&
               std::abs(v.cov_sin1sin2 - m.e_sin1sin2) <= 1e-9,
           "closed variances and covariances vs summation");
    p.rho = 0;
    c.that(std::abs(jupp_mardia_rho1sq(p)) <= 1e-12, "rho1^2 vanishes at rho = 0");
  }
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-1 + i / 10.0);
  for (int i = 0; i < 60; ++i) c.that(monotonicity_probe(d.bgwg(3, 16), grid).monotone(), "rho1^2 monotone in |rho|");
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst moment gap %.1e", worst);
  return buf;
}

struct DatasetTarget {
  const char* name;
  double bgwg_aic, bgwg_rho;
  int bgwg_delta;
  double bwg_aic;
  int alpha, beta, delta;
  double vms, vmc, wc;
  double x2;
  int df;
  std::vector<double> expected;
};

const std::vector<DatasetTarget> kTargets = {
    {"dataset1", 977.573, 0.804, -1, 978.786, 15, 15, -1, 976.045, 992.434, 978.609, 15.479, 9,
     {5.835, 5.197, 5.725, 5.105, 5.279, 5.312, 5.189, 5.277, 5.134, 5.178, 5.117, 5.268, 4.370, 5.464, 7.972, 11.577}},
    {"dataset2", 892.961, -0.945, 1, 919.672, 1, 1, 1, 889.110, 889.920, 921.386, 14.807, 8,
     {7.996, 5.231, 5.659, 9.668, 6.932, 5.845, 6.465, 5.649, 6.231, 6.811, 6.029, 6.578, 8.175, 9.587, 9.145}},
    {"dataset3", 824.418, -0.834, 1, 851.388, 2, 9, 1, 822.844, 822.986, 851.526, 10.023, 8,
     {7.353, 6.151, 9.830, 6.526, 7.081, 7.524, 8.412, 7.563, 5.001, 6.569, 5.751, 5.990, 5.178, 5.019, 5.052}},
};

std::vector<FitResult> bgwg_fits;

std::string reproductions(Check& c) {
  std::ostringstream s;
  for (const auto& t : kTargets) {
    const CountTable data = dataset(t.name);
    const FitResult g = fit_bgwg(data);
    bgwg_fits.push_back(g);
    const auto& gp = std::get<BgwgParams>(g.params);
    c.near(g.aic, t.bgwg_aic, 0.5, std::string(t.name) + " BGWG AIC");
    c.near(gp.rho, t.bgwg_rho, 0.03, std::string(t.name) + " BGWG rho");
    c.that(sign(gp.delta) == t.bgwg_delta, std::string(t.name) + " BGWG delta");
    const FitResult w = fit_bwg(data);
    const auto& wp = std::get<BwgParams>(w.params);
    c.near(w.aic, t.bwg_aic, 0.5, std::string(t.name) + " BWG AIC");
    c.that(wp.alpha == t.alpha && wp.beta == t.beta && sign(wp.delta) == t.delta,
           std::string(t.name) + " BWG (alpha, beta, delta) = (" + std::to_string(wp.alpha) + ", " +
               std::to_string(wp.beta) + ", " + std::to_string(sign(wp.delta)) + ")");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s BGWG %.3f rho %+.3f, BWG %.3f (%d,%d,%+d); ", t.name, g.aic, gp.rho, w.aic,
                  wp.alpha, wp.beta, sign(wp.delta));
    s << buf;
  }
  return s.str();
}

std::string goodness(Check& c) {
  c.near(chi_square_sf(16.919, 9), 0.05, 5e-4, "sf(16.919, 9)");
  c.near(chi_square_sf(15.507, 8), 0.05, 5e-4, "sf(15.507, 8)");
  std::ostringstream s;
  for (std::size_t i = 0; i < kTargets.size(); ++i) {
    const auto& t = kTargets[i];
    const CountTable data = dataset(t.name);
    const FitResult f = i < bgwg_fits.size() ? bgwg_fits[i] : fit_bgwg(data);
    const GofReport r = chisq_gof(data, pmf_table(std::get<BgwgParams>(f.params)), preset_groups(t.name), 6);
    c.near(r.x2, t.x2, 0.3, std::string(t.name) + " X2");
    c.that(r.df == t.df, std::string(t.name) + " df");
    double worst = 0;
    for (std::size_t g = 0; g < t.expected.size(); ++g) worst = std::max(worst, std::abs(r.expected[g] - t.expected[g]));
    c.that(r.expected.size() == t.expected.size() && worst <= 0.05,
           std::string(t.name) + " grouped expected, worst gap " + std::to_string(worst));
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s X2 %.3f df %d max|dE| %.3f; ", t.name, r.x2, r.df, worst);
    s << buf;
  }
  return s.str();
}

struct Target {
  const char* name;
  double truth, sd;
};

struct Block {
  const char* label;
  ModelParams truth;
  std::vector<Target> continuous;
  std::vector<std::pair<const char*, int>> dominant;
};

std::string simulation(Check& c) {
  const TorusGrid g(5, 6);
  const std::vector<Block> blocks = {
      {"BWG A", BwgParams{g, 0, 0, 0.2, 0.3, -0.5, Delta::positive},
       {{"q", 0.2, 0.017}, {"s", 0.3, 0.022}, {"rho", -0.5, 0.077}},
       {{"alpha", 0}, {"beta", 0}, {"delta", 1}}},
      {"BWG B", BwgParams{g, 2, 2, 0.6, 0.7, 0.8, Delta::negative},
       {{"q", 0.6, 0.037}, {"s", 0.7, 0.043}, {"rho", 0.8, 0.047}},
       {{"alpha", 2}, {"beta", 2}, {"delta", -1}}},
      {"BGWG A", BgwgParams{g, 2.0, 3.0, 0.2, 0.3, -0.5, Delta::positive},
       {{"q", 0.2, 0.018}, {"s", 0.3, 0.022}, {"rho", -0.5, 0.074}, {"alpha", 2, 0.047}, {"beta", 3, 0.057}},
       {{"delta", 1}}},
      {"BGWG B", BgwgParams{g, 3.0, 2.0, 0.6, 0.7, 0.8, Delta::negative},
       {{"q", 0.6, 0.040}, {"s", 0.7, 0.044}, {"rho", 0.8, 0.087}, {"alpha", 3, 0.118}, {"beta", 2, 0.192}},
       {{"delta", -1}}},
  };
  std::ostringstream s;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    SimulationConfig cfg;
    cfg.truth = blocks[b].truth;
    cfg.sample_sizes = {500};
    cfg.replicates = 200;
    cfg.seed = 6000 + b;
    const SimulationRow row = run_simulation_study(cfg).at(0);
    double worst = 0;
    for (const auto& p : blocks[b].continuous) {
      const double z = std::abs(row.continuous.at(p.name).mean - p.truth) / p.sd;
      worst = std::max(worst, z);
      c.that(z <= 3, std::string(blocks[b].label) + " mean " + p.name + " off by " + std::to_string(z) + " SDs");
    }
    double lowest = 1;
    for (const auto& [name, value] : blocks[b].dominant) {
      const auto& tally = row.discrete.at(name);
      const auto it = tally.find(value);
      const double f = it == tally.end() ? 0.0 : it->second / 200.0;
      lowest = std::min(lowest, f);
      c.that(f >= 0.99, std::string(blocks[b].label) + " " + name + " frequency " + std::to_string(f));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s max %.2f SD, min freq %.3f; ", blocks[b].label, worst, lowest);
    s << buf;
  }
  return s.str();
}

std::string baselines(Check& c) {
  std::ostringstream s;
  int outside = 0;
  for (std::size_t i = 0; i < kTargets.size(); ++i) {
    const auto& t = kTargets[i];
    const CountTable data = dataset(t.name);
    const double ours_bgwg = i < bgwg_fits.size() ? bgwg_fits[i].aic : fit_bgwg(data).aic;
    FitOptions o;
    o.standard_errors = false;
    const std::array<std::pair<Family, double>, 3> models{
        {{Family::vm_sine, t.vms}, {Family::vm_cosine, t.vmc}, {Family::wrapped_cauchy, t.wc}}};
    for (const auto& [f, target] : models) {
      const double a = fit_baseline(data, f, o).aic;
      const bool within = std::abs(a - target) <= 2.0;
      outside += !within;
      c.that(within, std::string(t.name) + " " + std::string(family_name(f)) + " AIC " + std::to_string(a) + " vs " +
                         std::to_string(target) + " (sector discretization)");
      // BGWG must sit on the same side of each baseline as in the reference comparison
      c.that((ours_bgwg < a) == (t.bgwg_aic < target),
             std::string(t.name) + " BGWG vs " + std::string(family_name(f)) + " ordering");
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s %s %.2f; ", t.name, std::string(family_name(f)).c_str(), a);
      s << buf;
    }
  }
  return s.str();
}

std::string sampler(Check& c) {
  const BwgParams p{TorusGrid(5, 6), 0, 0, 0.2, 0.3, -0.5, Delta::positive};
  const long n = 100000;
  const SampleBatch a = sample_joint(p, n, 8080);
  const Eigen::MatrixXi counts = tally(p.grid, a.pairs);
  const Eigen::MatrixXd e = pmf_table(p).p * double(n);
  const double x2 = ((counts.cast<double>() - e).array().square() / e.array()).sum();
  const double pv = boost::math::cdf(boost::math::complement(boost::math::chi_squared(double(e.size() - 1)), x2));
  c.that(pv > 1e-6, "chi-square screen p = " + std::to_string(pv));
  const SampleBatch b = sample_joint(p, n, 8080);
  c.that(a.pairs.size() == b.pairs.size() &&
             std::equal(a.pairs.begin(), a.pairs.end(), b.pairs.begin()),
         "seeded draws repeat");
  const std::vector<std::string> args{"simulate", "--family", "bwg", "--m1", "5", "--m2", "6", "--q", "0.2",
                                      "--s", "0.3", "--rho", "-0.5", "--n", "100000", "--seed", "8080"};
  std::ostringstream o1, o2, err;
  c.that(dispatch(args, o1, err) == kExitOk && dispatch(args, o2, err) == kExitOk, "simulate subcommand runs");
  c.that(o1.str() == o2.str() && !o1.str().empty(), "simulate output is byte-identical");
  char buf[96];
  std::snprintf(buf, sizeof buf, "X2 %.2f on %td df, p %.3g, %zu bytes repeated", x2, e.size() - 1, pv, o1.str().size());
  return buf;
}

}  // namespace

int main() {
  report(1, "exactness suite", exactness);
  report(2, "mode theorems", modes, true);
  report(3, "moments suite", moments);
  report(4, "dataset reproductions", reproductions);
  report(5, "goodness-of-fit reproductions", goodness);
  report(6, "simulation study, 200 replicates at n = 500", simulation);
  report(7, "baseline AICs and ordering", baselines);
  report(8, "sampler fidelity", sampler);
  std::printf("%d of 8 criteria failed (%d with known counterexamples)\n", failed_criteria + known_failures,
              known_failures);
  return failed_criteria == 0 ? 0 : 1;
}

#include "torusfit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "torusfit/baselines.hpp"
#include "torusfit/fixtures.hpp"
#include "torusfit/gof.hpp"
#include "torusfit/inference.hpp"
#include "torusfit/io.hpp"
#include "torusfit/moments.hpp"
#include "torusfit/sampling.hpp"
#include "torusfit/simstudy.hpp"

namespace torusfit {
namespace {

constexpr std::string_view kFixturePrefix = "fixture:";
constexpr std::string_view kObservationPrefix = "obs:";

CountTable load_table(const std::string& spec, int m1, int m2, std::ostream& err) {
  if (spec.rfind(kFixturePrefix, 0) == 0) return dataset(spec.substr(kFixturePrefix.size()));
  if (spec.rfind(kObservationPrefix, 0) == 0) {
    ObservationTally t = parse_observations(spec.substr(kObservationPrefix.size()));
    if ((m1 && m1 != 16) || (m2 && m2 != 16)) throw DomainError("observation files tally onto a 16x16 grid");
    if (t.calm_dropped) err << "dropped " << t.calm_dropped << " calm rows\n";
    return std::move(t.table);
  }
  return parse_count_table(spec, m1, m2);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Writes to the file when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct ParamFlags {
  std::string family = "bwg";
  int m1 = 16, m2 = 16;
  double alpha = 0, beta = 0, q = 0.5, s = 0.5, rho = 0;
  int delta = 1;
  std::string fit_file;

  void attach(CLI::App* app, bool with_fit_file) {
    app->add_option("--family", family, "bwg or bgwg")->capture_default_str();
    app->add_option("--m1", m1)->capture_default_str();
    app->add_option("--m2", m2)->capture_default_str();
    app->add_option("--alpha", alpha)->capture_default_str();
    app->add_option("--beta", beta)->capture_default_str();
    app->add_option("--q", q)->capture_default_str();
    app->add_option("--s", s)->capture_default_str();
    app->add_option("--rho", rho)->capture_default_str();
    app->add_option("--delta", delta, "-1 or 1")->capture_default_str();
    if (with_fit_file) app->add_option("--fit", fit_file, "FitResult JSON to take parameters from");
  }

  FittedParams build() const {
    if (!fit_file.empty()) {
      const nlohmann::json j = read_json(fit_file);
      return params_from_json(family_from_name(j.at("family").get<std::string>()), j.at("params"));
    }
    const Family f = family_from_name(family);
    const TorusGrid g(m1, m2);
    if (f == Family::bwg) {
      if (alpha != std::floor(alpha) || beta != std::floor(beta))
        throw DomainError("BWG locations must be integers; use --family bgwg");
      BwgParams p{g, int(alpha), int(beta), q, s, rho, delta_from_int(delta)};
      p.validate();
      return p;
    }
    if (f == Family::bgwg) {
      BgwgParams p{g, alpha, beta, q, s, rho, delta_from_int(delta)};
      p.validate();
      return p;
    }
    throw DomainError("only bwg and bgwg are accepted here");
  }
};

PmfTable table_of(const FittedParams& p, const TorusGrid& grid, Discretization how) {
  if (const auto* b = std::get_if<BwgParams>(&p)) return pmf_table(*b);
  if (const auto* b = std::get_if<BgwgParams>(&p)) return pmf_table(*b);
  return discretize(std::get<BaselineParams>(p), grid, how);
}

FitResult run_fit(const CountTable& data, Family f, const FitOptions& opt) {
  switch (f) {
    case Family::bwg: return fit_bwg(data, opt);
    case Family::bgwg: return fit_bgwg(data, opt);
    default: return fit_baseline(data, f, opt);
  }
}

nlohmann::json moments_json(const TrigMoments& m) {
  return {{"e_cos1", m.e_cos1},         {"e_cos2", m.e_cos2},         {"e_sin1", m.e_sin1},
          {"e_sin2", m.e_sin2},         {"e_cos1cos1", m.e_cos1cos1}, {"e_cos2cos2", m.e_cos2cos2},
          {"e_sin1sin1", m.e_sin1sin1}, {"e_sin2sin2", m.e_sin2sin2}, {"e_cos1cos2", m.e_cos1cos2},
          {"e_cos1sin2", m.e_cos1sin2}, {"e_sin1cos2", m.e_sin1cos2}, {"e_sin1sin2", m.e_sin1sin2},
          {"e_cos1sin1", m.e_cos1sin1}, {"e_cos2sin2", m.e_cos2sin2}};
}

}  // namespace

FittedParams params_from_json(Family family, const nlohmann::json& j) {
  try {
    if (family == Family::bwg || family == Family::bgwg) {
      const TorusGrid g(j.at("m1").get<int>(), j.at("m2").get<int>());
      const Delta d = delta_from_int(j.at("delta").get<int>());
      if (family == Family::bwg) {
        BwgParams p{g, j.at("alpha").get<int>(), j.at("beta").get<int>(), j.at("q").get<double>(),
                    j.at("s").get<double>(), j.at("rho").get<double>(), d};
        p.validate();
        return p;
      }
      BgwgParams p{g, j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("q").get<double>(),
                   j.at("s").get<double>(), j.at("rho").get<double>(), d};
      p.validate();
      return p;
    }
    const auto names = continuous_names(family);
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x(i) = j.at(names[i]).get<double>();
    BaselineParams b = baseline_from_vector(family, x);
    b.validate();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("parameter record: ") + e.what());
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete toroidal wrapped geometric models: fitting, sampling and diagnostics", "torusfit"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit; FitResult JSON");
  std::string fit_family = "bgwg", fit_data, fit_out, fit_disc = "sector";
  int fit_m1 = 0, fit_m2 = 0, fit_starts = 0;
  std::uint64_t fit_seed = 0;
  bool fit_no_se = false;
  double fit_eps = 1e-4;
  fit->add_option("--family", fit_family, "bwg|bgwg|wc|vms|vmc")->capture_default_str();
  fit->add_option("--data", fit_data, "count table CSV, fixture:<name> or obs:<compass pairs CSV>")->required();
  fit->add_option("--m1", fit_m1, "expected X1 size (0 = infer)");
  fit->add_option("--m2", fit_m2, "expected X2 size (0 = infer)");
  fit->add_option("--starts", fit_starts, "starts per discrete branch (0 = default)");
  fit->add_option("--seed", fit_seed);
  fit->add_option("--discretization", fit_disc, "sector|point (baselines)")->capture_default_str();
  fit->add_flag("--no-se", fit_no_se, "skip standard errors");
  fit->add_option("--eps", fit_eps, "q, s are searched on [eps, 1 - eps]")->capture_default_str();
  fit->add_option("--out", fit_out, "output file (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw pairs; CSV x1_index,x2_index");
  ParamFlags sim_p;
  sim_p.attach(sim, true);
  std::size_t sim_n = 100;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--n", sim_n)->capture_default_str();
  sim->add_option("--seed", sim_seed)->capture_default_str();
  sim->add_option("--out", sim_out);

  // gof
  auto* gof = app.add_subcommand("gof", "Pearson chi-square goodness of fit; GofReport JSON");
  std::string gof_data, gof_groups, gof_preset, gof_fit, gof_family = "bgwg", gof_out;
  int gof_p = 6;
  gof->add_option("--data", gof_data, "count table CSV, fixture:<name> or obs:<compass pairs CSV>");
  gof->add_option("--preset", gof_preset, "dataset1|dataset2|dataset3: fixture data and reference groups");
  gof->add_option("--groups", gof_groups, "preset:<name>|auto|file:<path>");
  gof->add_option("--fit", gof_fit, "FitResult JSON (otherwise the model is fitted here)");
  gof->add_option("--family", gof_family, "family fitted when --fit is absent")->capture_default_str();
  gof->add_option("--params", gof_p, "fitted parameter count subtracted from df")->capture_default_str();
  gof->add_option("--out", gof_out);

  // compare
  auto* cmp = app.add_subcommand("compare", "fit all five models; AIC ranking");
  std::string cmp_data, cmp_format = "csv", cmp_out, cmp_disc = "sector";
  cmp->add_option("--data", cmp_data, "count table CSV, fixture:<name> or obs:<compass pairs CSV>")->required();
  cmp->add_option("--format", cmp_format, "csv|json")->capture_default_str();
  cmp->add_option("--discretization", cmp_disc)->capture_default_str();
  cmp->add_option("--out", cmp_out);

  // moments
  auto* mom = app.add_subcommand("moments", "trigonometric moments and circular correlation; JSON");
  ParamFlags mom_p;
  mom_p.attach(mom, true);
  std::string mom_engine = "brute";
  mom->add_option("--engine", mom_engine, "brute|closed")->capture_default_str();

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "long-format k,l,value CSV of a pmf or a count table");
  ParamFlags heat_p;
  heat_p.attach(heat, true);
  std::string heat_data, heat_out;
  heat->add_option("--data", heat_data, "emit counts of this table instead of a pmf");
  heat->add_option("--out", heat_out);

  // simstudy
  auto* study = app.add_subcommand("simstudy", "simulation study from a JSON config; summary CSV");
  std::string study_config, study_out;
  study->add_option("--config", study_config)->required();
  study->add_option("--out", study_out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*fit) {
      FitOptions opt;
      opt.starts = fit_starts;
      opt.seed = fit_seed;
      opt.standard_errors = !fit_no_se;
      opt.eps = fit_eps;
      opt.discretization = discretization_from_name(fit_disc);
      const CountTable data = load_table(fit_data, fit_m1, fit_m2, err);
      const FitResult r = run_fit(data, family_from_name(fit_family), opt);
      Sink sink(fit_out, out);
      sink.get() << to_json(r).dump(2) << "\n";
    } else if (*sim) {
      const FittedParams p = sim_p.build();
      SampleBatch batch;
      if (const auto* b = std::get_if<BwgParams>(&p)) batch = sample_joint(*b, sim_n, sim_seed);
      else if (const auto* b = std::get_if<BgwgParams>(&p)) batch = sample_joint(*b, sim_n, sim_seed);
      else throw DomainError("simulation supports bwg and bgwg only");
      Sink sink(sim_out, out);
      sink.get() << "x1_index,x2_index\n";
      for (const auto& pt : batch.pairs) sink.get() << pt.k << ',' << pt.l << '\n';
    } else if (*gof) {
      if (!gof_preset.empty()) {
        if (gof_data.empty()) gof_data = std::string(kFixturePrefix) + gof_preset;
        if (gof_groups.empty()) gof_groups = "preset:" + gof_preset;
      }
      if (gof_data.empty()) throw DomainError("gof needs --data or --preset");
      if (gof_groups.empty()) gof_groups = "auto";
      const CountTable data = load_table(gof_data, 0, 0, err);
      FitResult model;
      if (!gof_fit.empty()) {
        const nlohmann::json j = read_json(gof_fit);
        model.family = family_from_name(j.at("family").get<std::string>());
        model.params = params_from_json(model.family, j.at("params"));
        if (j.contains("discretization"))
          model.discretization = discretization_from_name(j["discretization"].get<std::string>());
      } else {
        FitOptions opt;
        opt.standard_errors = false;
        model = run_fit(data, family_from_name(gof_family), opt);
      }
      const PmfTable pmf = table_of(model.params, data.grid, model.discretization);
      std::vector<GroupRange> groups;
      if (gof_groups == "auto") {
        groups = auto_merge_groups(flatten_row_major(pmf.p) * double(data.n));
      } else if (gof_groups.rfind("preset:", 0) == 0) {
        groups = preset_groups(gof_groups.substr(7));
      } else if (gof_groups.rfind("file:", 0) == 0) {
        std::ifstream in(gof_groups.substr(5));
        if (!in) throw IoError("cannot open '" + gof_groups.substr(5) + "' for reading");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        groups = parse_groups(text);
      } else {
        throw DomainError("--groups must be preset:<name>, auto or file:<path>");
      }
      const GofReport rep = chisq_gof(data, pmf, groups, gof_p);
      nlohmann::json j = to_json(rep);
      j["model"] = to_json(model.params);
      j["family"] = std::string(family_name(model.family));
      Sink sink(gof_out, out);
      sink.get() << j.dump(2) << "\n";
    } else if (*cmp) {
      const CountTable data = load_table(cmp_data, 0, 0, err);
      FitOptions opt;
      opt.standard_errors = false;
      opt.discretization = discretization_from_name(cmp_disc);
      std::vector<FitResult> fits;
      for (Family f : {Family::bwg, Family::bgwg, Family::wrapped_cauchy, Family::vm_sine, Family::vm_cosine})
        fits.push_back(run_fit(data, f, opt));
      std::stable_sort(fits.begin(), fits.end(), [](const auto& a, const auto& b) { return a.aic < b.aic; });
      Sink sink(cmp_out, out);
      if (cmp_format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < fits.size(); ++i)
          arr.push_back({{"rank", i + 1},
                         {"family", std::string(family_name(fits[i].family))},
                         {"aic", fits[i].aic},
                         {"loglik", fits[i].loglik},
                         {"num_params", fits[i].num_params},
                         {"params", to_json(fits[i].params)}});
        sink.get() << arr.dump(2) << "\n";
      } else if (cmp_format == "csv") {
        sink.get() << "rank,family,aic,loglik,num_params\n";
        for (std::size_t i = 0; i < fits.size(); ++i)
          sink.get() << i + 1 << ',' << family_name(fits[i].family) << ',' << format_number(fits[i].aic) << ','
                     << format_number(fits[i].loglik) << ',' << fits[i].num_params << '\n';
      } else {
        throw DomainError("--format must be csv or json");
      }
    } else if (*mom) {
      const FittedParams p = mom_p.build();
      if (std::holds_alternative<BaselineParams>(p)) throw DomainError("moments need bwg or bgwg parameters");
      const MomentEngine engine = mom_engine == "closed" ? MomentEngine::closed
                                  : mom_engine == "brute" ? MomentEngine::brute
                                                          : throw DomainError("--engine must be brute or closed");
      const TrigMoments m = std::visit(
          [&](const auto& q) -> TrigMoments {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, BaselineParams>) {
              throw DomainError("moments need bwg or bgwg parameters");
            } else {
              return engine == MomentEngine::closed ? trig_moments_closed(q) : trig_moments_brute(q);
            }
          },
          p);
      const CorrelationComponents c = correlation_components(m);
      nlohmann::json j{{"engine", mom_engine}, {"params", to_json(p)}, {"moments", moments_json(m)}};
      j["correlation"] = {{"rho1cc", c.rho1cc}, {"rho1cs", c.rho1cs}, {"rho1sc", c.rho1sc}, {"rho1ss", c.rho1ss},
                          {"rho1p", c.rho1p},   {"rho2p", c.rho2p},   {"rho1sq", c.rho1sq}};
      out << j.dump(2) << "\n";
    } else if (*heat) {
      Sink sink(heat_out, out);
      if (!heat_data.empty()) {
        emit_heatmap(sink.get(), load_table(heat_data, 0, 0, err).counts.cast<double>());
      } else {
        const FittedParams p = heat_p.build();
        TorusGrid g(heat_p.m1, heat_p.m2);
        if (const auto* b = std::get_if<BwgParams>(&p)) g = b->grid;
        if (const auto* b = std::get_if<BgwgParams>(&p)) g = b->grid;
        emit_heatmap(sink.get(), table_of(p, g, Discretization::sector).p);
      }
    } else if (*study) {
      const nlohmann::json j = read_json(study_config);
      SimulationConfig cfg;
      const Family f = family_from_name(j.at("family").get<std::string>());
      if (f != Family::bwg && f != Family::bgwg) throw DomainError("simstudy supports bwg and bgwg");
      const FittedParams truth = params_from_json(f, j.at("params"));
      if (const auto* b = std::get_if<BwgParams>(&truth)) cfg.truth = *b;
      else cfg.truth = std::get<BgwgParams>(truth);
      cfg.sample_sizes = j.value("sample_sizes", cfg.sample_sizes);
      cfg.replicates = j.value("replicates", cfg.replicates);
      cfg.seed = j.value("seed", cfg.seed);
      cfg.fit.starts = j.value("starts", 0);
      cfg.fit.eps = j.value("eps", cfg.fit.eps);
      const auto rows = run_simulation_study(cfg);
      Sink sink(study_out, out);
      write_simulation_csv(sink.get(), rows);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace torusfit

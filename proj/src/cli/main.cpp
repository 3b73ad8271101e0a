// mstop: value tables, claim advisor, rule-comparison experiments and
// series-expansion fits for k-claim stopping over T years.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "mstop/config.hpp"
#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/series.hpp"
#include "mstop/simulation.hpp"
#include "mstop/stopping_rule.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mstop;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string preset;
};

struct TableOptions {
  int T = 0;  // 0: keep the configured horizon
  int k = 0;
  std::string objective;
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

fs::path out_dir(const GlobalOptions& g) {
  fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + g.out + "': " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

// Config for table-style commands: --config file, else a named preset,
// else the log-normal example.
RunConfig resolve_config(const GlobalOptions& g, const TableOptions& t) {
  RunConfig cfg;
  if (!g.config.empty()) {
    cfg = load_config(g.config);
  } else if (g.preset.empty() || g.preset == "lognormal") {
    cfg = lognormal_preset();
  } else {
    const ExperimentPreset p = make_preset(g.preset);
    cfg.lda = p.lda;
    cfg.policy = p.policy;
    cfg.policy.objective = p.objectives.front();
    cfg.horizon = p.horizon;
    if (p.ilp_aux) cfg.lda = make_lda({p.ilp_aux->aux_rate}, p.ilp_aux->aux_severity);
  }
  if (t.T > 0) cfg.horizon.T = t.T;
  if (t.k > 0) cfg.horizon.k = t.k;
  cfg.horizon.validate();
  if (!t.objective.empty()) cfg.policy.objective = parse_objective(t.objective);
  if (g.seed) cfg.mc_seed = *g.seed;
  return cfg;
}

int cmd_value_table(const GlobalOptions& g, const TableOptions& t) {
  const RunConfig cfg = resolve_config(g, t);
  const GainModelPtr model = build_gain_model(cfg);
  const fs::path dir = out_dir(g);
  ValueTable table;
  if (const auto* emp = dynamic_cast<const EmpiricalGainModel*>(model.get())) {
    const ValueTableWithError te = compute_value_table_with_error(*emp, cfg.horizon);
    table = te.table;
    auto f = open_out(dir / "value_table_stderr.csv");
    te.stderr_.write_csv(f);
  } else {
    table = compute_value_table(*model, cfg.horizon);
  }
  {
    auto f = open_out(dir / "value_table.csv");
    table.write_csv(f);
  }
  {
    auto f = open_out(dir / "thresholds.csv");
    Thresholds(table).write_csv(f);
  }
  std::cout << std::setprecision(10) << "v(" << cfg.horizon.T << "," << cfg.horizon.k << ") = " << table.game_value()
            << "\n";
  table.write_csv(std::cout, 4);
  return 0;
}

int cmd_advise(const GlobalOptions& g, const TableOptions& t, bool raw_loss) {
  const RunConfig cfg = resolve_config(g, t);
  if (raw_loss && cfg.policy.objective != Objective::Local) {
    throw ConfigError("--loss only applies to the local objective");
  }
  const GainModelPtr model = build_gain_model(cfg);
  const ValueTable table = compute_value_table(*model, cfg.horizon);
  const Thresholds th(table);
  const int T = cfg.horizon.T;
  const int k = cfg.horizon.k;

  StoppingState state;
  std::string line;
  std::cout << std::fixed << std::setprecision(4);
  while (state.year <= T && state.rights_used < k) {
    const double b = active_threshold(th, state);
    std::cout << "year " << state.year << "/" << T << ", right " << state.rights_used + 1 << "/" << k
              << ", threshold " << (b == kForced ? std::string("forced") : std::to_string(b)) << "\n"
              << (raw_loss ? "annual loss> " : "gain> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    double x = 0.0;
    std::istringstream in(line);
    if (!(in >> x) || !(in >> std::ws).eof() || !std::isfinite(x)) {
      std::cout << "not a number, try again\n";
      continue;
    }
    const double w = raw_loss ? -x : x;
    if (decide(th, state, w) == Decision::Claim) {
      ++state.rights_used;
      std::cout << "Claim" << (b == kForced ? " (forced)" : "") << "\n";
    } else {
      std::cout << "Wait\n";
    }
    ++state.year;
  }
  std::cout << "done: " << state.rights_used << " of " << k << " rights used\n";
  return 0;
}

json report_json(const ExperimentResult& r) {
  json j;
  j["preset"] = r.preset.name;
  j["policy"] = {{"kind", to_string(r.preset.policy.kind)}, {"param", r.preset.policy.param}};
  j["M"] = r.preset.M;
  j["seed"] = r.preset.seed;
  j["horizon"] = {{"T", r.preset.horizon.T}, {"k", r.preset.horizon.k}};
  if (r.preset.policy.kind == PolicyKind::ALP) {
    j["exceedance"] = {{"simulated", r.exceedance},
                       {"closed_form", ALPLocalModel(r.preset.lda, r.preset.policy.param).exceedance_probability()}};
  }
  for (const auto& o : r.objectives) {
    json oj;
    oj["objective"] = to_string(o.objective);
    oj["game_value"] = o.report.game_value;
    oj["reference_line"] = o.report.reference_line;
    oj["optimal_beats_all"] = o.report.optimal_beats_all;
    for (const auto& rule : o.report.rules) {
      oj["rules"].push_back({{"name", rule.name}, {"mean", rule.mean}, {"stderr", rule.stderr_}});
    }
    for (const auto& t : o.report.tests) {
      oj["tests"].push_back({{"rule", t.rule},
                             {"mean_difference", t.mean_difference},
                             {"stderr", t.stderr_},
                             {"z", t.z},
                             {"optimal_better", t.optimal_better}});
    }
    if (o.proxy) oj["price_proxy"] = {{"value", o.proxy->value}, {"stderr", o.proxy->stderr_}};
    j["objectives"].push_back(oj);
  }
  return j;
}

int cmd_experiment(const GlobalOptions& g, std::size_t samples) {
  ExperimentPreset p = make_preset(g.preset.empty() ? "alp-study" : g.preset);
  if (g.seed) p.seed = *g.seed;
  if (samples > 0) p.M = samples;
  const ExperimentResult r = run_experiment(p);
  const fs::path dir = out_dir(g);
  const json report = report_json(r);
  {
    auto f = open_out(dir / "report.json");
    f << report.dump(2) << "\n";
  }
  {
    auto f = open_out(dir / "hist.csv");
    f << "objective,rule,bin_lo,bin_hi,count\n";
    for (const auto& o : r.objectives) {
      for (const auto& rule : o.report.rules) {
        const auto& h = rule.histogram;
        const double width = h.counts.empty() ? 0.0 : (h.hi - h.lo) / static_cast<double>(h.counts.size());
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
          f << to_string(o.objective) << "," << rule.name << "," << h.lo + width * b << "," << h.lo + width * (b + 1)
            << "," << h.counts[b] << "\n";
        }
      }
    }
  }
  {
    auto f = open_out(dir / "triples.csv");
    f << "objective,claim_years,frequency\n";
    for (const auto& o : r.objectives) {
      for (const auto& [taus, freq] : o.triples) {
        std::string s;
        for (std::size_t i = 0; i < taus.size(); ++i) s += (i ? " " : "") + std::to_string(taus[i]);
        f << to_string(o.objective) << "," << s << "," << freq << "\n";
      }
    }
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

MomentSet approx_moments(const RunConfig& cfg, const ApproxSource& src) {
  switch (src.kind) {
    case ApproxSource::Kind::Moments:
      return src.moments;
    case ApproxSource::Kind::Gamma:
      return gamma_moments(src.gamma_shape, src.gamma_rate);
    case ApproxSource::Kind::LogNormalCompound: {
      std::array<double, 4> raw{};
      for (int n = 1; n <= 4; ++n) {
        raw[static_cast<std::size_t>(n - 1)] = std::exp(n * src.ln_mu + 0.5 * n * n * src.ln_sigma * src.ln_sigma);
      }
      return compound_poisson_moments(src.rate, raw);
    }
    case ApproxSource::Kind::PolicySample: {
      if (cfg.model != RunConfig::ModelKind::LDA) throw ConfigError("policy-sample needs an lda model");
      const ILPAuxModel aux = cfg.ilp_aux();
      const ScenarioBatch batch = simulate_batch(cfg.lda, cfg.policy, 1, cfg.mc_samples, cfg.mc_seed, &aux);
      return sample_moments(batch.Ztilde);
    }
  }
  throw ConfigError("unknown approximation source");
}

json fit_json(const ExpansionFit& fit) {
  return {{"moments",
           {{"mean", fit.moments.mean},
            {"variance", fit.moments.variance},
            {"mu3", fit.moments.mu3},
            {"mu4", fit.moments.mu4}}},
          {"a", fit.a},
          {"b", fit.b},
          {"A3", fit.A3},
          {"A4", fit.A4},
          {"Astar", fit.Astar},
          {"positivity",
           {{"verdict", fit.positivity.positive ? "Positive" : "Violated"},
            {"at_u", number_or_null(fit.positivity.at_u)},
            {"min_bracket", fit.positivity.min_value}}},
          {"admissible", shape_admissible(fit.a, fit.moments.mu3, fit.moments.mu4)}};
}

int cmd_approx(const GlobalOptions& g, int points) {
  if (g.config.empty()) throw ConfigError("approx needs --config with an \"approx\" section");
  RunConfig cfg = load_config(g.config);
  if (g.seed) cfg.mc_seed = *g.seed;
  if (!cfg.approx) throw ConfigError("config /approx: missing");
  const MomentSet m = approx_moments(cfg, *cfg.approx);
  const ExpansionFit fit = fit_expansion(m);
  json out = fit_json(fit);
  if (!fit.positivity.positive) out["refit"] = fit_json(constrained_refit(fit));

  const double u_max = default_u_max(fit.a);
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i) grid.push_back(u_max * i / points);
  const PositivityCurve curve = positivity_boundary(fit.a, grid);
  const AdmissibleSegment seg = admissible_segment(fit.a, u_max);
  if (seg.found) out["admissible_segment"] = {{"u_lo", seg.u_lo}, {"u_hi", number_or_null(seg.u_hi)}};

  const fs::path dir = out_dir(g);
  {
    auto f = open_out(dir / "fit.json");
    f << out.dump(2) << "\n";
  }
  {
    auto f = open_out(dir / "boundary.csv");
    f << std::setprecision(12) << "u,mu3,mu4,admissible\n";
    for (const auto& p : curve.samples) {
      f << p.u << "," << p.mu3 << "," << p.mu4 << "," << (shape_admissible(fit.a, p.mu3, p.mu4, 1e-9) ? 1 : 0)
        << "\n";
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_validate() {
  int failed = 0;
  for (const auto& id : checks::criterion_ids()) {
    for (const auto& r : checks::run_criterion(id, checks::Scale::Quick)) {
      if (r.published) {
        std::cout << "SKIP [" << r.id << "] " << r.name << "\n";
        continue;
      }
      std::cout << (r.pass ? "PASS [" : "FAIL [") << r.id << "] " << r.name << ": " << r.detail << "\n" << std::flush;
      if (!r.pass) ++failed;
    }
  }
  std::cout << (failed == 0 ? "all oracle checks passed\n" : std::to_string(failed) + " oracle checks failed\n");
  return failed == 0 ? 0 : 1;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal k-claim stopping over T years"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--preset", g.preset, "lognormal, alp-study, pap-study or ilp-study");

  TableOptions t;
  auto add_table_options = [&](CLI::App* sub) {
    sub->add_option("--T", t.T, "Override the number of years");
    sub->add_option("--k", t.k, "Override the number of claims");
    sub->add_option("--objective", t.objective, "local or global");
  };
  auto* value_table = app.add_subcommand("value-table", "Write value table and thresholds CSV");
  add_table_options(value_table);
  auto* advise = app.add_subcommand("advise", "Read annual gains from stdin and advise Claim or Wait");
  add_table_options(advise);
  bool raw_loss = false;
  advise->add_flag("--loss", raw_loss, "Inputs are annual insured losses (local objective)");
  auto* experiment = app.add_subcommand("experiment", "Run a rule-comparison preset");
  std::size_t samples = 0;
  experiment->add_option("--samples", samples, "Number of simulated paths");
  auto* approx = app.add_subcommand("approx", "Fit the Gamma-Laguerre expansion and trace its positivity boundary");
  int points = 400;
  approx->add_option("--points", points, "Boundary curve points")->check(CLI::PositiveNumber);
  auto* validate = app.add_subcommand("validate", "Run the oracle checks at reduced size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  try {
    if (*value_table) return cmd_value_table(g, t);
    if (*advise) return cmd_advise(g, t, raw_loss);
    if (*experiment) return cmd_experiment(g, samples);
    if (*approx) return cmd_approx(g, points);
    if (*validate) return cmd_validate();
  } catch (const ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const std::domain_error& e) {
    return fail("config", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), 2);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}

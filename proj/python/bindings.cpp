// Python module _mstop: thin wrappers returning plain lists and dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mstop/config.hpp"
#include "mstop/distributions.hpp"
#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/reference_models.hpp"
#include "mstop/series.hpp"
#include "mstop/simulation.hpp"
#include "mstop/special_functions.hpp"
#include "mstop/stopping_rule.hpp"

namespace py = pybind11;
using namespace mstop;

namespace {

// Rows L = 1..T; entries l = 1..min(L, k).
std::vector<std::vector<double>> rows(const ValueTable& t) {
  std::vector<std::vector<double>> out;
  for (int L = 1; L <= t.T(); ++L) {
    std::vector<double> r;
    for (int l = 1; l <= std::min(L, t.k()); ++l) r.push_back(t.at(L, l));
    out.push_back(r);
  }
  return out;
}

ValueTable table_for(const std::string& config_json, int T, int k) {
  RunConfig cfg = config_json.empty() ? lognormal_preset() : parse_config(config_json);
  if (T > 0) cfg.horizon.T = T;
  if (k > 0) cfg.horizon.k = k;
  cfg.horizon.validate();
  return compute_value_table(*build_gain_model(cfg), cfg.horizon);
}

}  // namespace

PYBIND11_MODULE(_mstop, m) {
  m.doc() = "Optimal multiple stopping for insurance claims";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("bessel_k", &bessel_k, py::arg("p"), py::arg("z"));
  m.def(
      "ig_cdf", [](double x, double mu, double lambda) { return ig_cdf(x, {mu, lambda}); }, py::arg("x"),
      py::arg("mu"), py::arg("lam"));

  m.def(
      "value_table", [](const std::string& config_json, int T, int k) { return rows(table_for(config_json, T, k)); },
      py::arg("config_json") = "", py::arg("T") = 0, py::arg("k") = 0,
      "Value table rows for a JSON config (default: log-normal example).");

  m.def(
      "run_rule",
      [](const std::vector<double>& gains, const std::string& config_json, int k) {
        const ValueTable t = table_for(config_json, static_cast<int>(gains.size()), k);
        const StoppingResult r = run_rule(gains, t);
        return py::make_tuple(r.taus, r.realized_gain);
      },
      py::arg("gains"), py::arg("config_json") = "", py::arg("k") = 1,
      "Claim years and realized gain of the optimal rule along one gain path.");

  m.def(
      "threshold",
      [](const std::string& config_json, int T, int k, int year, int right) {
        return Thresholds(table_for(config_json, T, k)).at_year(year, right);
      },
      py::arg("config_json"), py::arg("T"), py::arg("k"), py::arg("year"), py::arg("right"));

  m.def(
      "fit_expansion",
      [](double mean, double variance, double mu3, double mu4) {
        const ExpansionFit f = fit_expansion({mean, variance, mu3, mu4});
        py::dict d;
        d["a"] = f.a;
        d["b"] = f.b;
        d["A3"] = f.A3;
        d["A4"] = f.A4;
        d["positive"] = f.positivity.positive;
        return d;
      },
      py::arg("mean"), py::arg("variance"), py::arg("mu3"), py::arg("mu4"));

  m.def(
      "experiment",
      [](const std::string& preset, std::size_t M, std::uint64_t seed) {
        ExperimentPreset p = make_preset(preset);
        if (M > 0) p.M = M;
        p.seed = seed;
        const ExperimentResult r = run_experiment(p);
        py::dict out;
        out["exceedance"] = r.exceedance;
        for (const auto& o : r.objectives) {
          py::dict d;
          d["game_value"] = o.report.game_value;
          d["reference_line"] = o.report.reference_line;
          d["optimal_beats_all"] = o.report.optimal_beats_all;
          py::dict means;
          for (const auto& rule : o.report.rules) means[py::str(rule.name)] = rule.mean;
          d["means"] = means;
          out[py::str(to_string(o.objective))] = d;
        }
        return out;
      },
      py::arg("preset"), py::arg("M") = 0, py::arg("seed") = 20240501);
}

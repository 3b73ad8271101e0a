#include "mstop/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/reference_models.hpp"

namespace mstop {
namespace {

using nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ConfigError("config " + pointer + ": " + what);
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& pointer) {
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& pointer) {
  const double v = number(j, pointer);
  if (!(v > 0.0) || !std::isfinite(v)) fail(pointer, "must be > 0");
  return v;
}

long long integer(const json& j, const std::string& pointer) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(pointer, "expected an integer");
  return j.get<long long>();
}

const json& object(const json& parent, const char* key, const std::string& pointer) {
  const json* j = find(parent, key);
  if (j == nullptr) fail(pointer, "missing");
  if (!j->is_object()) fail(pointer, "expected an object");
  return *j;
}

const json& member(const json& obj, const char* key, const std::string& pointer) {
  const json* j = find(obj, key);
  if (j == nullptr) fail(pointer, "missing");
  return *j;
}

ApproxSource parse_approx(const json& j) {
  if (!j.is_object()) fail("/approx", "expected an object");
  ApproxSource src;
  const std::string kind = j.value("source", std::string("moments"));
  if (kind == "moments") {
    src.kind = ApproxSource::Kind::Moments;
    src.moments.mean = number(member(j, "mean", "/approx/mean"), "/approx/mean");
    src.moments.variance = number(member(j, "variance", "/approx/variance"), "/approx/variance");
    src.moments.mu3 = number(member(j, "mu3", "/approx/mu3"), "/approx/mu3");
    src.moments.mu4 = number(member(j, "mu4", "/approx/mu4"), "/approx/mu4");
    src.moments.validate();
  } else if (kind == "lognormal-compound") {
    src.kind = ApproxSource::Kind::LogNormalCompound;
    src.rate = positive(member(j, "rate", "/approx/rate"), "/approx/rate");
    src.ln_mu = number(member(j, "mu", "/approx/mu"), "/approx/mu");
    src.ln_sigma = positive(member(j, "sigma", "/approx/sigma"), "/approx/sigma");
  } else if (kind == "gamma") {
    src.kind = ApproxSource::Kind::Gamma;
    src.gamma_shape = positive(member(j, "shape", "/approx/shape"), "/approx/shape");
    src.gamma_rate = positive(member(j, "rate", "/approx/rate"), "/approx/rate");
  } else if (kind == "policy-sample") {
    src.kind = ApproxSource::Kind::PolicySample;
  } else {
    fail("/approx/source", "unknown source '" + kind +
                               "' (expected moments, lognormal-compound, gamma or policy-sample)");
  }
  return src;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!root.is_object()) fail("/", "top level must be an object");

  RunConfig cfg;
  const std::string model = root.value("model", std::string("lda"));
  if (model == "lognormal") {
    cfg.model = RunConfig::ModelKind::LogNormal;
    if (const json* ln = find(root, "lognormal")) {
      if (const json* m = find(*ln, "mu")) cfg.ln_mu = number(*m, "/lognormal/mu");
      if (const json* s = find(*ln, "sigma")) cfg.ln_sigma = positive(*s, "/lognormal/sigma");
    }
    cfg.horizon = {10, 9};
  } else if (model != "lda") {
    fail("/model", "unknown model '" + model + "' (expected lda or lognormal)");
  }

  if (const json* h = find(root, "horizon")) {
    if (!h->is_object()) fail("/horizon", "expected an object");
    cfg.horizon.T = static_cast<int>(integer(member(*h, "T", "/horizon/T"), "/horizon/T"));
    cfg.horizon.k = static_cast<int>(integer(member(*h, "k", "/horizon/k"), "/horizon/k"));
  }
  try {
    cfg.horizon.validate();
  } catch (const ConfigError& e) {
    fail("/horizon", e.what());
  }

  if (const json* mc = find(root, "mc")) {
    if (const json* s = find(*mc, "samples")) {
      const long long n = integer(*s, "/mc/samples");
      if (n < 1) fail("/mc/samples", "must be >= 1");
      cfg.mc_samples = static_cast<std::size_t>(n);
    }
    if (const json* s = find(*mc, "seed")) {
      const long long n = integer(*s, "/mc/seed");
      if (n < 0) fail("/mc/seed", "must be >= 0");
      cfg.mc_seed = static_cast<std::uint64_t>(n);
    }
  }

  if (const json* o = find(root, "objective")) {
    if (!o->is_string()) fail("/objective", "expected \"local\" or \"global\"");
    try {
      cfg.policy.objective = parse_objective(o->get<std::string>());
    } catch (const ConfigError& e) {
      fail("/objective", e.what());
    }
  }

  if (cfg.model == RunConfig::ModelKind::LDA) {
    const json& freq = object(root, "frequency", "/frequency");
    const json& sev = object(root, "severity", "/severity");
    FrequencyModel f{positive(member(freq, "rate", "/frequency/rate"), "/frequency/rate")};
    IGParams s{positive(member(sev, "mu", "/severity/mu"), "/severity/mu"),
               positive(member(sev, "lambda", "/severity/lambda"), "/severity/lambda")};
    std::optional<int> m_max;
    if (const json* t = find(root, "truncation")) {
      if (const json* m = find(*t, "m_max")) m_max = static_cast<int>(integer(*m, "/truncation/m_max"));
    }
    try {
      cfg.lda = make_lda(f, s, m_max);
    } catch (const ConfigError& e) {
      fail("/truncation/m_max", e.what());
    }
    if (const json* p = find(root, "policy")) {
      if (!p->is_object()) fail("/policy", "expected an object");
      const json& kind = member(*p, "kind", "/policy/kind");
      if (!kind.is_string()) fail("/policy/kind", "expected ILP, ALP or PAP");
      try {
        cfg.policy.kind = parse_policy_kind(kind.get<std::string>());
      } catch (const ConfigError& e) {
        fail("/policy/kind", e.what());
      }
      cfg.policy.param = positive(member(*p, "param", "/policy/param"), "/policy/param");
    } else if (!find(root, "approx")) {
      fail("/policy", "missing");
    }
  }

  if (const json* a = find(root, "approx")) cfg.approx = parse_approx(*a);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig lognormal_preset() {
  RunConfig cfg;
  cfg.model = RunConfig::ModelKind::LogNormal;
  cfg.horizon = {10, 9};
  return cfg;
}

GainModelPtr build_gain_model(const RunConfig& cfg) {
  if (cfg.model == RunConfig::ModelKind::LogNormal) {
    if (cfg.policy.objective != Objective::Local) {
      throw ConfigError("config /objective: the log-normal model is local only");
    }
    return lognormal_local_model(cfg.ln_mu, cfg.ln_sigma);
  }
  const ILPAuxModel aux = cfg.ilp_aux();
  return make_gain_model(cfg.lda, cfg.policy, &aux, cfg.mc_samples, cfg.mc_seed);
}

}  // namespace mstop

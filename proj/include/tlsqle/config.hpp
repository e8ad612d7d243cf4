#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsqle/errors.hpp"
#include "tlsqle/model.hpp"
#include "tlsqle/output.hpp"
#include "tlsqle/timedomain.hpp"

namespace tlsqle {

enum class Command { Steady, Spectrum, Sweep, TimeDomain, HpCheck, Validate };

struct SweepAxis {
  std::string name;  // one of alpha_in, omega, theta
  double start = 0.0, stop = 0.0;
  int count = 0;
  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct GridSpec {
  double start = 0.0, stop = 0.0;
  int count = 0;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Settings for the spin/boson convergence report.
struct HpCheckSpec {
  std::vector<double> j_values{16, 32, 64, 128, 256};
  std::vector<int> n_max_values{0, 1, 2, 4, 8};
  std::string branch = "both";  // minus | plus | both
  friend bool operator==(const HpCheckSpec&, const HpCheckSpec&) = default;
};

struct RunSpec {
  ModelParams params;
  Command command = Command::Steady;
  std::optional<SweepAxis> sweep_axis;
  std::optional<GridSpec> omega_grid;
  std::optional<GridSpec> theta_grid;
  std::optional<IntegrationConfig> integration;
  HpCheckSpec hp;
  std::string output_path;
  OutputFormat output_format = OutputFormat::Csv;
  std::string dump_trajectories;  // optional binary trajectory dump path
};

inline bool operator==(const IntegrationConfig& a, const IntegrationConfig& b) {
  return a.dt == b.dt && a.t_total == b.t_total && a.n_traj == b.n_traj && a.seed == b.seed &&
         a.scheme == b.scheme && a.sample_stride == b.sample_stride &&
         a.noise_enabled == b.noise_enabled && a.initial == b.initial;
}

inline bool operator==(const RunSpec& a, const RunSpec& b) {
  return a.params == b.params && a.command == b.command && a.sweep_axis == b.sweep_axis &&
         a.omega_grid == b.omega_grid && a.theta_grid == b.theta_grid &&
         a.integration == b.integration && a.hp == b.hp && a.output_path == b.output_path &&
         a.output_format == b.output_format && a.dump_trajectories == b.dump_trajectories;
}

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                                const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown key \"" + (context.empty() ? it.key() : context + "." + it.key()) +
                       "\"");
}

inline double require_number(const Json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.contains(key)) throw ParseError("missing key \"" + ctx + key + "\"");
  if (!obj[key].is_number()) throw ParseError("key \"" + ctx + key + "\" must be a number");
  return obj[key].get<double>();
}

inline Complex parse_complex(const Json& v, const std::string& ctx) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_object()) {
    reject_unknown_keys(v, {"re", "im"}, ctx);
    return Complex(v.value("re", 0.0), v.value("im", 0.0));
  }
  throw ParseError("key \"" + ctx + "\" must be a number or {\"re\",\"im\"}");
}

inline HpBranch parse_branch(const Json& v, const std::string& ctx) {
  if (!v.is_string()) throw ParseError("key \"" + ctx + "\" must be \"minus\" or \"plus\"");
  const std::string s = v.get<std::string>();
  if (s == "minus") return HpBranch::Minus;
  if (s == "plus") return HpBranch::Plus;
  throw ParseError("key \"" + ctx + "\" must be \"minus\" or \"plus\", got \"" + s + "\"");
}

inline ModelParams parse_params(const Json& obj) {
  if (!obj.is_object()) throw ParseError("\"params\" must be an object");
  reject_unknown_keys(obj,
                      {"kappa", "kappa_n", "delta", "alpha_in", "n_th", "n_th_tls", "branch"},
                      "params");
  ModelParams p;
  p.kappa = require_number(obj, "kappa", "params.");
  p.kappa_n = obj.contains("kappa_n") ? require_number(obj, "kappa_n", "params.") : 0.0;
  p.delta = obj.contains("delta") ? require_number(obj, "delta", "params.") : 0.0;
  if (obj.contains("alpha_in")) p.alpha_in = parse_complex(obj["alpha_in"], "params.alpha_in");
  p.n_th = obj.contains("n_th") ? require_number(obj, "n_th", "params.") : 0.0;
  p.n_th_tls = obj.contains("n_th_tls") ? require_number(obj, "n_th_tls", "params.") : 0.0;
  if (obj.contains("branch")) p.branch = parse_branch(obj["branch"], "params.branch");
  return validate_params(p);
}

inline Command parse_command(const std::string& s) {
  if (s == "steady") return Command::Steady;
  if (s == "spectrum") return Command::Spectrum;
  if (s == "sweep") return Command::Sweep;
  if (s == "timedomain") return Command::TimeDomain;
  if (s == "hpcheck") return Command::HpCheck;
  if (s == "validate") return Command::Validate;
  throw ParseError("unknown command \"" + s + "\"");
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Steady: return "steady";
    case Command::Spectrum: return "spectrum";
    case Command::Sweep: return "sweep";
    case Command::TimeDomain: return "timedomain";
    case Command::HpCheck: return "hpcheck";
    case Command::Validate: return "validate";
  }
  return "?";
}

inline GridSpec parse_grid(const Json& obj, const std::string& ctx) {
  if (!obj.is_object()) throw ParseError("\"" + ctx + "\" must be an object");
  reject_unknown_keys(obj, {"start", "stop", "count"}, ctx);
  GridSpec g;
  g.start = require_number(obj, "start", ctx + ".");
  g.stop = require_number(obj, "stop", ctx + ".");
  g.count = static_cast<int>(require_number(obj, "count", ctx + "."));
  if (g.count < 1 || !std::isfinite(g.start) || !std::isfinite(g.stop))
    throw ParseError("grid \"" + ctx + "\" requires finite bounds and count >= 1");
  return g;
}

inline IntegrationConfig parse_integration(const Json& obj) {
  reject_unknown_keys(obj,
                      {"dt", "t_total", "n_traj", "seed", "scheme", "sample_stride",
                       "noise_enabled", "initial"},
                      "integration");
  IntegrationConfig c;
  c.dt = require_number(obj, "dt", "integration.");
  c.t_total = require_number(obj, "t_total", "integration.");
  c.n_traj = static_cast<int>(obj.value("n_traj", 1.0));
  c.seed = obj.value("seed", 0ull);
  if (obj.contains("scheme")) {
    const std::string s = obj["scheme"].get<std::string>();
    if (s == "euler_maruyama") c.scheme = Scheme::EulerMaruyama;
    else if (s == "stratonovich_midpoint") c.scheme = Scheme::StratonovichMidpoint;
    else throw ParseError("integration.scheme must be euler_maruyama or stratonovich_midpoint");
  }
  c.sample_stride = static_cast<int>(obj.value("sample_stride", 1.0));
  c.noise_enabled = obj.value("noise_enabled", true);
  if (obj.contains("initial")) c.initial = parse_complex(obj["initial"], "integration.initial");
  if (!(c.dt > 0.0) || !(c.t_total > 0.0) || c.n_traj < 1 || c.sample_stride < 1)
    throw ParseError("integration requires dt > 0, t_total > 0, n_traj >= 1, sample_stride >= 1");
  return c;
}

inline HpCheckSpec parse_hp(const Json& obj) {
  reject_unknown_keys(obj, {"j", "n_max", "branch"}, "hp");
  HpCheckSpec h;
  if (obj.contains("j")) h.j_values = obj["j"].get<std::vector<double>>();
  if (obj.contains("n_max")) h.n_max_values = obj["n_max"].get<std::vector<int>>();
  if (obj.contains("branch")) {
    h.branch = obj["branch"].get<std::string>();
    if (h.branch != "minus" && h.branch != "plus" && h.branch != "both")
      throw ParseError("hp.branch must be minus, plus or both");
  }
  return h;
}

}  // namespace detail

// Parses and fully validates a JSON run specification. Unknown keys are
// rejected with the offending key named; parameter validation is delegated to
// validate_params.
inline RunSpec parse_config(const std::string& source) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");
  detail::reject_unknown_keys(doc,
                              {"command", "params", "sweep_axis", "grids", "integration", "hp",
                               "output_path", "output_format", "dump_trajectories"},
                              "");
  RunSpec spec;
  if (!doc.contains("command")) throw ParseError("missing key \"command\"");
  spec.command = detail::parse_command(doc["command"].get<std::string>());
  if (!doc.contains("params")) throw ParseError("missing key \"params\"");
  spec.params = detail::parse_params(doc["params"]);

  if (doc.contains("sweep_axis")) {
    const auto& s = doc["sweep_axis"];
    detail::reject_unknown_keys(s, {"name", "start", "stop", "count"}, "sweep_axis");
    SweepAxis ax;
    if (!s.contains("name")) throw ParseError("missing key \"sweep_axis.name\"");
    ax.name = s["name"].get<std::string>();
    if (ax.name != "alpha_in" && ax.name != "omega" && ax.name != "theta")
      throw ParseError("sweep_axis.name must be alpha_in, omega or theta");
    ax.start = detail::require_number(s, "start", "sweep_axis.");
    ax.stop = detail::require_number(s, "stop", "sweep_axis.");
    ax.count = static_cast<int>(detail::require_number(s, "count", "sweep_axis."));
    if (ax.count < 2) throw UsageError("sweep_axis.count must be >= 2");
    if (ax.start == ax.stop) throw UsageError("sweep_axis.start must differ from stop");
    spec.sweep_axis = ax;
  }

  if (doc.contains("grids")) {
    const auto& g = doc["grids"];
    detail::reject_unknown_keys(g, {"omega", "theta"}, "grids");
    if (g.contains("omega")) spec.omega_grid = detail::parse_grid(g["omega"], "grids.omega");
    if (g.contains("theta")) spec.theta_grid = detail::parse_grid(g["theta"], "grids.theta");
  }

  if (doc.contains("integration")) spec.integration = detail::parse_integration(doc["integration"]);
  if (doc.contains("hp")) spec.hp = detail::parse_hp(doc["hp"]);
  if (doc.contains("output_path")) spec.output_path = doc["output_path"].get<std::string>();
  if (doc.contains("output_format")) {
    const std::string f = doc["output_format"].get<std::string>();
    if (f == "csv") spec.output_format = OutputFormat::Csv;
    else if (f == "json") spec.output_format = OutputFormat::Json;
    else throw ParseError("output_format must be csv or json");
  }
  if (doc.contains("dump_trajectories"))
    spec.dump_trajectories = doc["dump_trajectories"].get<std::string>();
  return spec;
}

// Serializes a RunSpec back to JSON; parse_config(to_json_config(s)) == s.
inline std::string to_json_config(const RunSpec& spec) {
  detail::Json doc;
  doc["command"] = detail::command_name(spec.command);
  doc["params"] = {{"kappa", spec.params.kappa},
                   {"kappa_n", spec.params.kappa_n},
                   {"delta", spec.params.delta},
                   {"alpha_in", {{"re", spec.params.alpha_in.real()},
                                 {"im", spec.params.alpha_in.imag()}}},
                   {"n_th", spec.params.n_th},
                   {"n_th_tls", spec.params.n_th_tls},
                   {"branch", branch_name(spec.params.branch)}};
  if (spec.sweep_axis)
    doc["sweep_axis"] = {{"name", spec.sweep_axis->name},
                         {"start", spec.sweep_axis->start},
                         {"stop", spec.sweep_axis->stop},
                         {"count", spec.sweep_axis->count}};
  detail::Json grids;
  if (spec.omega_grid)
    grids["omega"] = {{"start", spec.omega_grid->start},
                      {"stop", spec.omega_grid->stop},
                      {"count", spec.omega_grid->count}};
  if (spec.theta_grid)
    grids["theta"] = {{"start", spec.theta_grid->start},
                      {"stop", spec.theta_grid->stop},
                      {"count", spec.theta_grid->count}};
  if (!grids.empty()) doc["grids"] = grids;
  if (spec.integration) {
    const auto& c = *spec.integration;
    doc["integration"] = {
        {"dt", c.dt},
        {"t_total", c.t_total},
        {"n_traj", c.n_traj},
        {"seed", c.seed},
        {"scheme",
         c.scheme == Scheme::EulerMaruyama ? "euler_maruyama" : "stratonovich_midpoint"},
        {"sample_stride", c.sample_stride},
        {"noise_enabled", c.noise_enabled},
        {"initial", {{"re", c.initial.real()}, {"im", c.initial.imag()}}}};
  }
  doc["hp"] = {{"j", spec.hp.j_values}, {"n_max", spec.hp.n_max_values},
               {"branch", spec.hp.branch}};
  if (!spec.output_path.empty()) doc["output_path"] = spec.output_path;
  doc["output_format"] = spec.output_format == OutputFormat::Csv ? "csv" : "json";
  if (!spec.dump_trajectories.empty()) doc["dump_trajectories"] = spec.dump_trajectories;
  return doc.dump(2);
}

}  // namespace tlsqle

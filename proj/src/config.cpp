#include "mns/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mns {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(path.empty() ? key : path + "." + key,
                        "unknown key");
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& path,
                       const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(path + "." + key, "expected an integer");
  return v.get<std::uint64_t>();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Grid RunConfig::grid() const {
  try {
    return Grid::make(grid_dims, grid_lengths);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
}

EntropyProfile RunConfig::profile() const {
  if (profile_kind == "linear") {
    if (profile_coeffs.size() != 1)
      throw ConfigError("entropy_profile.coefficients",
                        "linear profile takes exactly one coefficient");
    return EntropyProfile::linear(profile_coeffs[0]);
  }
  if (profile_kind == "polynomial") {
    try {
      return EntropyProfile::polynomial(profile_coeffs);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("entropy_profile.coefficients", e.what());
    }
  }
  throw ConfigError("entropy_profile.kind",
                    "expected \"linear\" or \"polynomial\"");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");

  require_keys(j, "", {"grid", "eos", "transport", "entropy_profile",
                       "initial_condition", "integrator", "heat_mode",
                       "output", "seed"});

  RunConfig c;
  c.config_hash = fnv1a(j.dump());

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, "grid", {"dims", "lengths"});
    if (g.contains("dims")) {
      c.grid_dims.clear();
      for (const auto& d : g.at("dims")) {
        if (!d.is_number_integer())
          throw ConfigError("grid.dims", "expected integers");
        c.grid_dims.push_back(d.get<int>());
      }
    }
    if (g.contains("lengths")) {
      c.grid_lengths.clear();
      for (const auto& d : g.at("lengths"))
        c.grid_lengths.push_back(d.get<double>());
    }
  }
  c.grid();  // validate now

  if (j.contains("eos")) {
    const json& e = j.at("eos");
    require_keys(e, "eos", {"gamma", "c_v", "rho_ref", "T_ref", "s_ref"});
    try {
      c.eos = EquationOfState::make(get_number(e, "eos", "gamma", 1.4),
                                    get_number(e, "eos", "c_v", 1.0),
                                    get_number(e, "eos", "rho_ref", 1.0),
                                    get_number(e, "eos", "T_ref", 1.0),
                                    get_number(e, "eos", "s_ref", 0.0));
    } catch (const std::invalid_argument& err) {
      throw ConfigError("eos", err.what());
    }
  }

  if (j.contains("transport")) {
    const json& t = j.at("transport");
    require_keys(t, "transport", {"eta", "zeta", "kappa", "lambda"});
    const double eta = get_number(t, "transport", "eta", 0.0);
    const double zeta = get_number(t, "transport", "zeta", 0.0);
    const double lambda = get_number(t, "transport", "lambda", 1.0);
    try {
      if (t.contains("kappa") && t.at("kappa").is_array()) {
        const json& kt = t.at("kappa");
        if (kt.size() != 3)
          throw std::invalid_argument("tensor kappa must be 3x3");
        Mat3 m{};
        for (int i = 0; i < 3; ++i) {
          if (!kt[i].is_array() || kt[i].size() != 3)
            throw std::invalid_argument("tensor kappa must be 3x3");
          for (int k = 0; k < 3; ++k) m[i][k] = kt[i][k].get<double>();
        }
        c.transport = TransportCoefficients::make_tensor(eta, zeta, m, lambda);
      } else {
        c.transport = TransportCoefficients::make(
            eta, zeta, get_number(t, "transport", "kappa", 0.0), lambda);
      }
    } catch (const std::invalid_argument& err) {
      throw ConfigError("transport.kappa", err.what());
    }
  }

  if (j.contains("entropy_profile")) {
    const json& p = j.at("entropy_profile");
    require_keys(p, "entropy_profile", {"kind", "coefficients"});
    if (p.contains("kind")) c.profile_kind = p.at("kind").get<std::string>();
    if (p.contains("coefficients")) {
      c.profile_coeffs.clear();
      for (const auto& v : p.at("coefficients"))
        c.profile_coeffs.push_back(v.get<double>());
    }
  }
  c.profile();  // validate now

  if (j.contains("initial_condition")) {
    const json& ic = j.at("initial_condition");
    require_keys(ic, "initial_condition", {"preset", "amplitude", "seed"});
    if (ic.contains("preset")) {
      const std::string p = ic.at("preset").get<std::string>();
      if (p == "uniform") c.preset = InitialPreset::uniform;
      else if (p == "shear") c.preset = InitialPreset::shear;
      else if (p == "entropy_bump") c.preset = InitialPreset::entropy_bump;
      else if (p == "random") c.preset = InitialPreset::random;
      else
        throw ConfigError("initial_condition.preset",
                          "unknown preset \"" + p + "\"");
    }
    c.ic_amplitude = get_number(ic, "initial_condition", "amplitude", 0.01);
    c.ic_seed = get_uint(ic, "initial_condition", "seed", 1);
  }

  if (j.contains("integrator")) {
    const json& it = j.at("integrator");
    require_keys(it, "integrator", {"dt", "t_end", "output_every"});
    if (it.contains("dt")) {
      const json& dt = it.at("dt");
      if (dt.is_string()) {
        if (dt.get<std::string>() != "auto")
          throw ConfigError("integrator.dt", "expected a number or \"auto\"");
      } else {
        const double v = dt.get<double>();
        if (!(v > 0.0)) throw ConfigError("integrator.dt", "must be > 0");
        c.dt = v;
      }
    }
    c.t_end = get_number(it, "integrator", "t_end", 1.0);
    if (!(c.t_end > 0.0)) throw ConfigError("integrator.t_end", "must be > 0");
    c.output_every = int(get_uint(it, "integrator", "output_every", 10));
    if (c.output_every < 1)
      throw ConfigError("integrator.output_every", "must be >= 1");
  }

  if (j.contains("heat_mode")) {
    const std::string m = j.at("heat_mode").get<std::string>();
    if (m == "bracket-consistent") c.heat_mode = HeatMode::bracket_consistent;
    else if (m == "eq14") c.heat_mode = HeatMode::eq14;
    else
      throw ConfigError("heat_mode",
                        "expected \"bracket-consistent\" or \"eq14\"");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, "output", {"directory", "snapshot_every"});
    if (o.contains("directory"))
      c.output_dir = o.at("directory").get<std::string>();
    c.snapshot_every = int(get_uint(o, "output", "snapshot_every", 0));
  }

  c.seed = get_uint(j, "", "seed", 1);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig default_config() {
  RunConfig c;
  c.config_hash = fnv1a("default");
  return c;
}

const char* heat_mode_name(HeatMode m) {
  return m == HeatMode::eq14 ? "eq14" : "bracket-consistent";
}

const char* preset_name(InitialPreset p) {
  switch (p) {
    case InitialPreset::uniform: return "uniform";
    case InitialPreset::shear: return "shear";
    case InitialPreset::entropy_bump: return "entropy_bump";
    default: return "random";
  }
}

}  // namespace mns

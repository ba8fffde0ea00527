#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mns/functionals.hpp"
#include "mns/grid.hpp"
#include "mns/thermo.hpp"

namespace mns {

/// Configuration failure; `path` names the offending field (dotted).
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message),
        path(std::move(field_path)) {}
  std::string path;
};

/// Which discrete form the direct Navier-Stokes oracle takes. `eq14` is the
/// literal textbook discretization (advective momentum, q = -kappa grad T),
/// differing from the bracket dynamics at second order in h.
/// `bracket_consistent` writes the same equations in the rotational /
/// enthalpy-gradient form with the bracket-native heat flux, matching the
/// bracket dynamics to roundoff.
enum class HeatMode { bracket_consistent, eq14 };

enum class InitialPreset { uniform, shear, entropy_bump, random };

struct RunConfig {
  std::vector<int> grid_dims{16, 16};
  std::vector<double> grid_lengths{1.0, 1.0};
  EquationOfState eos;
  TransportCoefficients transport = TransportCoefficients::make(0.01, 0.0, 0.01, 1.0);
  std::string profile_kind = "linear";
  std::vector<double> profile_coeffs{1.0};
  InitialPreset preset = InitialPreset::uniform;
  double ic_amplitude = 0.01;
  std::uint64_t ic_seed = 1;
  std::optional<double> dt;  // empty: choose from the stability limit
  double t_end = 1.0;
  int output_every = 10;
  HeatMode heat_mode = HeatMode::bracket_consistent;
  std::string output_dir = "out";
  int snapshot_every = 0;  // 0: snapshots only at start and end
  std::uint64_t seed = 1;
  std::uint64_t config_hash = 0;

  Grid grid() const;
  EntropyProfile profile() const;
};

/// Parses and validates a JSON config. Unknown keys are rejected with the
/// full field path; all physical positivity constraints are checked here,
/// before any computation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

RunConfig default_config();

const char* heat_mode_name(HeatMode m);
const char* preset_name(InitialPreset p);

}  // namespace mns

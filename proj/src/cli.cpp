#include "mns/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mns/checks.hpp"
#include "mns/random_fields.hpp"
#include "mns/snapshot.hpp"

namespace mns {

namespace {

int config_failure(const ConfigError& e) {
  std::cerr << "config error: " << e.what() << "\n";
  return 2;
}

int numerical_failure(const NumericalError& e) {
  std::cerr << "numerical abort: " << e.what() << "\n";
  return 3;
}

RunConfig load_with_override(const std::string& config_path,
                             const std::string& out_override) {
  RunConfig config = load_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  return config;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool verbose) {
  RunConfig config;
  try {
    config = load_with_override(config_path, out_override);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    std::filesystem::create_directories(config.output_dir);
    const SnapshotSink sink = [&](int step, double t, const FluidState& st) {
      write_state_snapshot(config.output_dir, step, t, st, config.config_hash);
    };
    const RunResult result = run(config, sink);
    std::ofstream csv(config.output_dir + "/diagnostics.csv");
    csv << diagnostics_csv(result.records);

    const auto& first = result.records.front();
    const auto& last = result.records.back();
    if (verbose)
      std::cout << "dt=" << result.dt << " steps=" << result.steps
                << " records=" << result.records.size() << "\n";
    std::printf("final t=%.6g  H_drift_rel=%.3e  entropy_produced=%.6e\n",
                last.t, last.H_drift_rel, last.S_f - first.S_f);
    return 0;
  } catch (const ConfigError& e) {
    return config_failure(e);
  } catch (const NumericalError& e) {
    return numerical_failure(e);
  }
}

int cmd_check(const std::string& config_path, const std::string& out_override,
              bool verbose) {
  RunConfig config;
  try {
    config = load_with_override(config_path, out_override);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    const auto results = checks::run_invariant_suite(config);

    // Also emit the machine-readable degeneracy table.
    std::filesystem::create_directories(config.output_dir);
    {
      const Grid g = config.grid();
      const FluidState state = random_smooth_state(
          g, config.eos.rho_ref, config.eos.s_ref, config.seed);
      const BracketContext ctx =
          make_context(state, config.eos, config.transport);
      const DegeneracyReport rep =
          degeneracy_report(ctx, config.profile(), 50, config.seed + 2000);
      std::ofstream csv(config.output_dir + "/degeneracy.csv");
      rep.write_csv(csv);
    }

    bool all_pass = true;
    std::string first_fail;
    for (const auto& r : results) {
      std::printf("[%s] %-42s value=%-13.4e threshold=%-10.2e %s\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value,
                  r.threshold, verbose ? r.detail.c_str() : "");
      if (!r.pass && all_pass) {
        all_pass = false;
        first_fail = r.name;
      }
    }
    if (!all_pass) {
      std::cerr << "identity failed: " << first_fail << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    return config_failure(e);
  } catch (const NumericalError& e) {
    return numerical_failure(e);
  }
}

int cmd_rhs_compare(const std::string& config_path, bool /*verbose*/) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    const bool linear_matches = config.profile_kind == "linear" &&
                                config.profile_coeffs.size() == 1 &&
                                config.profile_coeffs[0] ==
                                    config.transport.lambda;

    // Per-field max-norm differences on the configured grid.
    const Grid g = config.grid();
    const FluidState state = random_smooth_state(
        g, config.eos.rho_ref, config.eos.s_ref, config.seed);
    const EntropyProfile profile =
        linear_matches ? config.profile()
                       : EntropyProfile::linear(config.transport.lambda);
    const Tendency tm =
        metriplectic_rhs(state, config.eos, config.transport, profile);
    auto rel = [](const ScalarField& x, const ScalarField& y) {
      const double d = max_abs(x - y);
      const double s = std::max(max_abs(x), max_abs(y));
      return s == 0.0 ? 0.0 : d / s;
    };
    std::printf("per-field max-norm rel diff, metriplectic vs direct:\n");
    std::printf("%-20s %12s %12s %12s %12s %12s\n", "mode", "vx", "vy", "vz",
                "rho", "s");
    for (HeatMode mode : {HeatMode::bracket_consistent, HeatMode::eq14}) {
      const Tendency td =
          direct_ns_rhs(state, config.eos, config.transport, mode);
      std::printf("%-20s %12.4e %12.4e %12.4e %12.4e %12.4e\n",
                  heat_mode_name(mode), rel(tm.v[0], td.v[0]),
                  rel(tm.v[1], td.v[1]), rel(tm.v[2], td.v[2]),
                  rel(tm.rho, td.rho), rel(tm.s, td.s));
    }
    if (!linear_matches)
      std::printf("note: configured profile is not f = lambda*s; compared "
                  "against the linear profile instead\n");

    const auto r = checks::oracle_equivalence(config.eos, config.transport,
                                              config.seed);
    std::printf("bracket-consistent mode over 10 random 16^3 states: "
                "max rel diff = %.4e\n", r.max_rel_diff_bc);
    std::printf("eq14 gaps (N=16,32,64): %.4e %.4e %.4e  order=%.3f\n",
                r.eq14_gap[0], r.eq14_gap[1], r.eq14_gap[2], r.eq14_order);
    const bool pass = r.max_rel_diff_bc <= 1e-12 && r.eq14_order > 1.8 &&
                      r.eq14_order < 2.2;
    if (!pass) {
      std::cerr << "rhs-compare: tolerance exceeded\n";
      return 1;
    }
    return 0;
  } catch (const NumericalError& e) {
    return numerical_failure(e);
  }
}

int cmd_derivative_audit(const std::string& config_path, bool /*verbose*/) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }
  try {
    const Grid g = config.grid();
    const FluidState state = random_smooth_state(
        g, config.eos.rho_ref, config.eos.s_ref, config.seed);
    const auto audits = checks::audit_all(state, config.eos, 20,
                                          config.seed + 8000);
    double worst = 0.0;
    for (const auto& a : audits) {
      worst = std::max(worst, a.floor_error);
      std::printf("%-28s floor=%.3e %s\n", a.label.c_str(), a.floor_error,
                  a.fd_exact ? "(fd exact)"
                             : (a.quadratic_regime ? "(eps^2 regime)"
                                                   : "(no eps^2 regime)"));
    }
    std::printf("worst directional-derivative error: %.4e (threshold 1e-9)\n",
                worst);
    if (worst > 1e-9) {
      std::cerr << "derivative-audit: tolerance exceeded\n";
      return 1;
    }
    return 0;
  } catch (const NumericalError& e) {
    return numerical_failure(e);
  }
}

}  // namespace mns

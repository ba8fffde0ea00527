#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "mns/config.hpp"
#include "mns/dynamics.hpp"
#include "mns/random_fields.hpp"
#include "mns/snapshot.hpp"

using namespace mns;

namespace {

std::string check_path(const ConfigError& e) { return e.path; }

const char* valid_config = R"json({
  "grid": {"dims": [8, 8], "lengths": [1.0, 1.0]},
  "eos": {"gamma": 1.4, "c_v": 1.0, "rho_ref": 1.0, "T_ref": 1.0, "s_ref": 0.0},
  "transport": {"eta": 0.01, "zeta": 0.0, "kappa": 0.01, "lambda": 1.0},
  "entropy_profile": {"kind": "linear", "coefficients": [1.0]},
  "initial_condition": {"preset": "shear", "amplitude": 0.05, "seed": 3},
  "integrator": {"dt": 0.001, "t_end": 0.01, "output_every": 2},
  "heat_mode": "bracket-consistent",
  "output": {"directory": "out", "snapshot_every": 0},
  "seed": 7
})json";

}  // namespace

TEST_CASE("config: happy path") {
  const RunConfig c = parse_config(valid_config);
  CHECK(c.grid().rank() == 2);
  CHECK(c.eos.gamma == 1.4);
  CHECK(c.transport.eta == 0.01);
  CHECK(c.preset == InitialPreset::shear);
  CHECK(c.dt.has_value());
  CHECK(*c.dt == 0.001);
  CHECK(c.heat_mode == HeatMode::bracket_consistent);
  CHECK(c.config_hash != 0);
}

TEST_CASE("config: dt auto") {
  const RunConfig c = parse_config(R"({"integrator": {"dt": "auto"}})");
  CHECK(!c.dt.has_value());
}

TEST_CASE("config: unknown keys are rejected with their path") {
  try {
    (void)parse_config(R"({"transport": {"kappa_typo": 1.0}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(check_path(e) == "transport.kappa_typo");
  }
  try {
    (void)parse_config(R"({"grid": {"dims": [8, 8], "shape": "weird"}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(check_path(e) == "grid.shape");
  }
  CHECK_THROWS_AS((void)parse_config(R"({"grdi": {}})"), ConfigError);
}

TEST_CASE("config: asymmetric tensor kappa names transport.kappa") {
  try {
    (void)parse_config(
        R"({"transport": {"kappa": [[1,0.2,0],[0.1,1,0],[0,0,1]]}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(check_path(e) == "transport.kappa");
  }
  // symmetric PSD tensor parses
  const RunConfig c = parse_config(
      R"({"transport": {"kappa": [[1,0.2,0],[0.2,1,0],[0,0,1]]}})");
  CHECK(c.transport.tensor_mode());
}

TEST_CASE("config: physical validation failures") {
  CHECK_THROWS_AS((void)parse_config(R"({"grid": {"dims": [3]}})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"eos": {"gamma": 0.9}})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"transport": {"lambda": 0.0}})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"integrator": {"dt": -0.1}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config(
          R"({"entropy_profile": {"kind": "polynomial",
              "coefficients": [0,0,0,0,0,1]}})"),
      ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"heat_mode": "magic"})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config("not json"), ConfigError);
}

TEST_CASE("snapshot: bitwise round trip with metadata") {
  const auto dir = std::filesystem::temp_directory_path() / "mns_snap_test";
  std::filesystem::create_directories(dir);
  const int dims[2] = {8, 12};
  const double lens[2] = {1.0, 0.7};
  const Grid g = Grid::make(dims, lens);
  RandomStream rng(3);
  SmoothFn fn = random_smooth_fn(rng, 4, 1.0);
  fn.offset = 0.123456789012345;
  const ScalarField f = fn.sample(g);

  const std::string base = (dir / "field_rho").string();
  write_field_snapshot(base, "rho", f, 0.25, 0xabcdefull);
  SnapshotMeta meta;
  const ScalarField back = read_field_snapshot(base, &meta);
  REQUIRE(back.size() == f.size());
  for (std::size_t n = 0; n < f.size(); ++n) CHECK(back[n] == f[n]);
  CHECK(meta.field == "rho");
  CHECK(meta.dims[0] == 8);
  CHECK(meta.dims[1] == 12);
  CHECK(meta.dims[2] == 1);
  CHECK(meta.lengths[1] == 0.7);
  CHECK(meta.time == 0.25);
  CHECK(meta.config_hash == 0xabcdefull);
  std::filesystem::remove_all(dir);
}

TEST_CASE("diagnostics CSV: header, shortest round-trip values") {
  DiagnosticsRecord rec;
  rec.t = 0.1;
  rec.H = 1.0 / 3.0;
  rec.S_f = -2.7182818284590452;
  const std::string csv = diagnostics_csv({rec});
  CHECK(csv.find("# mns diagnostics v1") != std::string::npos);
  CHECK(csv.find("t,H,M,Px,Py,Pz,S_f,") != std::string::npos);

  // last line: parse back the H and S_f columns and compare bitwise
  std::istringstream is(csv);
  std::string line, data;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#' && line[0] != 't') data = line;
  std::vector<double> cols;
  std::istringstream ls(data);
  std::string tok;
  while (std::getline(ls, tok, ',')) cols.push_back(std::strtod(tok.c_str(), nullptr));
  REQUIRE(cols.size() == 13);
  CHECK(cols[1] == rec.H);
  CHECK(cols[6] == rec.S_f);
}

TEST_CASE("runs are deterministic: identical config, identical bytes") {
  RunConfig config = parse_config(valid_config);
  config.t_end = 0.005;
  const RunResult a = run(config);
  const RunResult b = run(config);
  CHECK(diagnostics_csv(a.records) == diagnostics_csv(b.records));
}

TEST_CASE("CSV rows are recomputable from the co-emitted snapshot") {
  const auto dir = std::filesystem::temp_directory_path() / "mns_run_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  RunConfig config = parse_config(valid_config);
  config.t_end = 0.004;
  config.output_every = 4;
  std::vector<int> snap_steps;
  const RunResult r = run(config, [&](int step, double t, const FluidState& st) {
    write_state_snapshot(dir.string(), step, t, st, config.config_hash);
    snap_steps.push_back(step);
  });

  REQUIRE(!snap_steps.empty());
  const int last = snap_steps.back();
  char tag[32];
  std::snprintf(tag, sizeof tag, "snap_%06d", last);
  const std::string base = (dir / tag).string();

  FluidState st;
  st.rho = read_field_snapshot(base + "_rho");
  st.s = read_field_snapshot(base + "_s");
  st.v = VectorField(st.rho.grid());
  st.v[0] = read_field_snapshot(base + "_vx");
  st.v[1] = read_field_snapshot(base + "_vy");
  st.v[2] = read_field_snapshot(base + "_vz");

  const auto& rec = r.records.back();
  CHECK(hamiltonian(config.eos).value(st) == rec.H);
  CHECK(mass().value(st) == rec.M);
  CHECK(generalized_entropy(config.profile()).value(st) == rec.S_f);
  for (int j = 0; j < 3; ++j) CHECK(momentum(j).value(st) == rec.P[j]);
  std::filesystem::remove_all(dir);
}

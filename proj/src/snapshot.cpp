#include "mns/snapshot.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mns {

namespace {

void put_le64(std::ofstream& out, double x) {
  const std::uint64_t u = std::bit_cast<std::uint64_t>(x);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((u >> (8 * i)) & 0xff);
  out.write(b, 8);
}

double get_le64(std::ifstream& in) {
  char b[8];
  in.read(b, 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i)
    u |= std::uint64_t(static_cast<unsigned char>(b[i])) << (8 * i);
  return std::bit_cast<double>(u);
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_field_snapshot(const std::string& path_base,
                          const std::string& field_name, const ScalarField& f,
                          double time, std::uint64_t config_hash) {
  {
    std::ofstream raw(path_base + ".f64", std::ios::binary);
    if (!raw)
      throw std::runtime_error("snapshot: cannot write " + path_base + ".f64");
    for (double x : f.data()) put_le64(raw, x);
  }
  nlohmann::json meta;
  meta["field"] = field_name;
  meta["dims"] = f.grid().dims;
  meta["lengths"] = f.grid().lengths;
  meta["layout"] = "axis-major (axis 0 slowest)";
  meta["dtype"] = "float64-le";
  meta["time"] = time;
  meta["config_hash"] = config_hash;
  std::ofstream ms(path_base + ".meta");
  if (!ms)
    throw std::runtime_error("snapshot: cannot write " + path_base + ".meta");
  ms << meta.dump(2) << '\n';
}

ScalarField read_field_snapshot(const std::string& path_base,
                                SnapshotMeta* meta_out) {
  std::ifstream ms(path_base + ".meta");
  if (!ms)
    throw std::runtime_error("snapshot: cannot read " + path_base + ".meta");
  nlohmann::json meta = nlohmann::json::parse(ms);

  SnapshotMeta m;
  m.field = meta.at("field").get<std::string>();
  for (int a = 0; a < 3; ++a) {
    m.dims[a] = meta.at("dims")[a].get<int>();
    m.lengths[a] = meta.at("lengths")[a].get<double>();
  }
  m.time = meta.at("time").get<double>();
  m.config_hash = meta.at("config_hash").get<std::uint64_t>();
  if (meta_out) *meta_out = m;

  Grid g;
  g.dims = m.dims;
  g.lengths = m.lengths;
  ScalarField f(g);
  std::ifstream raw(path_base + ".f64", std::ios::binary);
  if (!raw)
    throw std::runtime_error("snapshot: cannot read " + path_base + ".f64");
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = get_le64(raw);
  return f;
}

void write_state_snapshot(const std::string& dir, int step, double time,
                          const FluidState& state, std::uint64_t config_hash) {
  char tag[32];
  std::snprintf(tag, sizeof tag, "snap_%06d", step);
  const std::string base = dir + "/" + tag;
  write_field_snapshot(base + "_vx", "vx", state.v[0], time, config_hash);
  write_field_snapshot(base + "_vy", "vy", state.v[1], time, config_hash);
  write_field_snapshot(base + "_vz", "vz", state.v[2], time, config_hash);
  write_field_snapshot(base + "_rho", "rho", state.rho, time, config_hash);
  write_field_snapshot(base + "_s", "s", state.s, time, config_hash);
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::ostringstream os;
  os << "# mns diagnostics v1\n";
  os << "t,H,M,Px,Py,Pz,S_f,dSdt_bracket,dSdt_observed,H_drift_rel,"
        "max_abs_v,min_rho,min_T\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << format_double(r.H) << ','
       << format_double(r.M) << ',' << format_double(r.P[0]) << ','
       << format_double(r.P[1]) << ',' << format_double(r.P[2]) << ','
       << format_double(r.S_f) << ',' << format_double(r.dSdt_bracket) << ','
       << format_double(r.dSdt_observed) << ','
       << format_double(r.H_drift_rel) << ',' << format_double(r.max_abs_v)
       << ',' << format_double(r.min_rho) << ',' << format_double(r.min_T)
       << '\n';
  }
  return os.str();
}

}  // namespace mns

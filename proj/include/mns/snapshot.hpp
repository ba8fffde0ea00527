#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mns/dynamics.hpp"
#include "mns/state.hpp"

namespace mns {

/// Snapshots are per-field raw little-endian float64 in axis-major order
/// (axis 0 slowest), one `.f64` file per field plus a JSON `.meta` sidecar
/// recording grid dims, lengths, field name, time and the config hash.

void write_field_snapshot(const std::string& path_base,
                          const std::string& field_name, const ScalarField& f,
                          double time, std::uint64_t config_hash);

struct SnapshotMeta {
  std::string field;
  std::array<int, 3> dims;
  std::array<double, 3> lengths;
  double time = 0.0;
  std::uint64_t config_hash = 0;
};

/// Reads `<path_base>.f64` + `<path_base>.meta` back into a field.
ScalarField read_field_snapshot(const std::string& path_base,
                                SnapshotMeta* meta = nullptr);

/// Writes the five state fields (vx, vy, vz, rho, s) as
/// `<dir>/snap_<step>_<field>.{f64,meta}`.
void write_state_snapshot(const std::string& dir, int step, double time,
                          const FluidState& state, std::uint64_t config_hash);

/// Fixed, versioned diagnostics table. Values are printed with shortest
/// round-trip formatting, so rows are bit-reproducible and each value can be
/// recomputed exactly from the snapshot at the same timestamp.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);

}  // namespace mns

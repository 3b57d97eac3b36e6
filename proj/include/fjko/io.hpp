#pragma once

#include <filesystem>
#include <string>

#include "fjko/jko.hpp"

namespace fjko {

inline constexpr const char* kCodeVersion = "fjko 0.1.0";
inline constexpr const char* kSnapshotMagic = "FJKO0001";

struct Snapshot {
    Density density;
    double time = 0.0;
};

/// Binary snapshot, bit-exact: 32-byte header (magic "FJKO0001", u32 LE d,
/// u32 LE n, f64 LE L, f64 LE time) followed by n^d little-endian f64 values
/// row-major.
void write_snapshot(const std::filesystem::path& path, const Density& u, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

/// state_{k:05}.fjko for every state, summary.json, diagnostics.csv.
void write_run_outputs(const std::filesystem::path& dir, const Trajectory& traj);

/// The exact summary.json text (per-step diagnostics, config echo, code version).
std::string summary_json(const Trajectory& traj);
std::string diagnostics_csv(const Trajectory& traj);

/// Rebuild a trajectory from a run directory (states from the snapshots,
/// config and diagnostics from summary.json).
Trajectory read_run_outputs(const std::filesystem::path& dir);

/// Flat key=value config text; '#' starts a comment. Unknown keys are errors
/// naming the offending key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

}  // namespace fjko

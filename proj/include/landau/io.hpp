#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "landau/evolution.hpp"
#include "landau/grid.hpp"

namespace landau {

// Malformed configs, snapshots, or CLI options; mapped to exit code 3.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(InitialData::Kind kind);
InitialData::Kind initial_kind_from(const std::string& name);

// Full description of a simulation run. Parsed from key = value text
// ('#' starts a comment line); unknown, duplicate, or malformed keys raise
// input_error naming the 1-based line.
struct RunConfig {
    int n = 16;
    double extent = 6.0;

    double gamma = -3.0;
    double epsilon = -1.0;       // negative: auto (h/2 on the run grid)
    bool cutoff_columns = true;  // include the eta-cutoff dissipation terms in outputs

    InitialData initial;

    double horizon = 0.5;
    double dt = 0.0;      // 0: auto (per-step CFL-limited)
    double max_dt = 0.0;  // cap for auto mode; 0: none
    double cfl_safety = 0.9;
    bool semi_implicit = false;
    int sample_stride = 1;
    int dissipation_stride = 10;

    std::vector<std::string> checks = {"conservation", "monotonicity"};

    std::string out_dir = "out";
    std::vector<double> snapshot_times;
    std::uint64_t seed = 0;

    bool operator==(const RunConfig& other) const;
};

// Check names accepted in checks.enable.
const std::vector<std::string>& known_checks();

// Throws input_error; both overloads validate the semantic invariants
// (gamma in [-3,-2), n even, horizon > 0, ...) after parsing.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::filesystem::path& path);
void validate_config(const RunConfig& cfg);

// Canonical key order and full float precision: parse(serialize(c)) == c
// and serialize(parse(s)) is a fixed point.
std::string serialize_config(const RunConfig& cfg);

// Binary single-density state. Layout, all little-endian:
//   bytes 0..4   magic "LFSH1"
//   u32          byte-order tag 0x01020304
//   u32          grid n
//   f64          grid extent L (domain [-L, L]^3)
//   f64          gamma
//   f64          time
//   f64[n^3]     cell values, row-major (i, j, k)
struct Snapshot {
    VelocityGrid grid;
    double gamma = -3.0;
    double time = 0.0;
    std::vector<double> values;
};

inline constexpr std::uint32_t kSnapshotByteOrderTag = 0x01020304u;

// Atomic (temp + rename); load(save(s)) reproduces values bit-exactly.
void save_snapshot(const std::filesystem::path& path, const Snapshot& snap);
// Throws input_error on missing file, bad magic, opposite byte order,
// truncation, or trailing bytes.
Snapshot load_snapshot(const std::filesystem::path& path);

// One row per recorded sample. Fixed column order:
//   t, mass, px, py, pz, energy, entropy, llogl, fisher, linf,
// then on samples carrying a dissipation report (blank cells elsewhere):
//   entropy_dissipation, d_par, d_rad, d_sph, r_sph, fisher_dissipation_total,
// and with cutoff_columns also:
//   d_par_cut, d_rad_cut, d_sph_cut, r_sph_cut, j1, j2.
std::string series_csv(const TrajectoryRecord& traj, bool cutoff_columns);

// Ordered key = value report; values formatted like the config serializer.
struct Summary {
    std::vector<std::pair<std::string, std::string>> rows;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
    void add_flag(const std::string& key, bool pass);  // PASS / FAIL
    std::string text() const;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// Writes content to path via a sibling temp file and rename, so readers
// never observe a partial file. Creates parent directories.
void atomic_write(const std::filesystem::path& path, std::string_view content);

} // namespace landau

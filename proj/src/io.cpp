#include "landau/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace landau {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
    throw input_error("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail_line(line, "expected a number for " + key + ", got '" + v + "'");
    return x;
}

long long to_int(const std::string& v, int line, const std::string& key) {
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail_line(line, "expected an integer for " + key + ", got '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& v, int line, const std::string& key) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail_line(line, "expected a non-negative integer for " + key + ", got '" + v + "'");
    return x;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "on") return true;
    if (v == "off") return false;
    fail_line(line, "expected on or off for " + key + ", got '" + v + "'");
}

Eigen::Vector3d to_vec3(const std::string& v, int line, const std::string& key) {
    std::istringstream is(v);
    std::string a, b, c, rest;
    if (!(is >> a >> b >> c) || (is >> rest))
        fail_line(line, "expected three numbers for " + key + ", got '" + v + "'");
    return {to_double(a, line, key), to_double(b, line, key), to_double(c, line, key)};
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t comma = v.find(',', pos);
        if (comma == std::string::npos) comma = v.size();
        parts.push_back(trim(std::string_view(v).substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return parts;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
    }
    return out;
}

} // namespace

std::string to_string(InitialData::Kind kind) {
    switch (kind) {
        case InitialData::Kind::maxwellian: return "maxwellian";
        case InitialData::Kind::bimaxwellian: return "bimaxwellian";
        case InitialData::Kind::bump: return "bump";
        case InitialData::Kind::perturbed_maxwellian: return "perturbed_maxwellian";
    }
    throw std::logic_error("unhandled initial kind");
}

InitialData::Kind initial_kind_from(const std::string& name) {
    if (name == "maxwellian") return InitialData::Kind::maxwellian;
    if (name == "bimaxwellian") return InitialData::Kind::bimaxwellian;
    if (name == "bump") return InitialData::Kind::bump;
    if (name == "perturbed_maxwellian") return InitialData::Kind::perturbed_maxwellian;
    throw input_error("unknown initial kind '" + name +
                      "' (maxwellian, bimaxwellian, bump, perturbed_maxwellian)");
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {"conservation", "monotonicity", "decay",
                                                   "consistency"};
    return names;
}

bool RunConfig::operator==(const RunConfig& o) const {
    return n == o.n && extent == o.extent && gamma == o.gamma && epsilon == o.epsilon &&
           cutoff_columns == o.cutoff_columns && initial.kind == o.initial.kind &&
           initial.mass == o.initial.mass && initial.temperature == o.initial.temperature &&
           initial.mean.x() == o.initial.mean.x() && initial.mean.y() == o.initial.mean.y() &&
           initial.mean.z() == o.initial.mean.z() &&
           initial.support_radius == o.initial.support_radius &&
           initial.amplitude == o.initial.amplitude &&
           initial.rescale_mass == o.initial.rescale_mass && horizon == o.horizon &&
           dt == o.dt && max_dt == o.max_dt && cfl_safety == o.cfl_safety &&
           semi_implicit == o.semi_implicit && sample_stride == o.sample_stride &&
           dissipation_stride == o.dissipation_stride && checks == o.checks &&
           out_dir == o.out_dir && snapshot_times == o.snapshot_times && seed == o.seed;
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;

    using Handler = std::function<void(const std::string&, int)>;
    const std::map<std::string, Handler> handlers = {
        {"grid.n", [&](const std::string& v, int l) { cfg.n = static_cast<int>(to_int(v, l, "grid.n")); }},
        {"grid.extent", [&](const std::string& v, int l) { cfg.extent = to_double(v, l, "grid.extent"); }},
        {"kernel.gamma", [&](const std::string& v, int l) { cfg.gamma = to_double(v, l, "kernel.gamma"); }},
        {"kernel.epsilon",
         [&](const std::string& v, int l) {
             cfg.epsilon = (v == "auto") ? -1.0 : to_double(v, l, "kernel.epsilon");
         }},
        {"kernel.cutoff",
         [&](const std::string& v, int l) { cfg.cutoff_columns = to_bool(v, l, "kernel.cutoff"); }},
        {"initial.kind",
         [&](const std::string& v, int l) {
             try {
                 cfg.initial.kind = initial_kind_from(v);
             } catch (const input_error& e) {
                 fail_line(l, e.what());
             }
         }},
        {"initial.mass",
         [&](const std::string& v, int l) { cfg.initial.mass = to_double(v, l, "initial.mass"); }},
        {"initial.temperature",
         [&](const std::string& v, int l) {
             cfg.initial.temperature = to_double(v, l, "initial.temperature");
         }},
        {"initial.mean",
         [&](const std::string& v, int l) { cfg.initial.mean = to_vec3(v, l, "initial.mean"); }},
        {"initial.support_radius",
         [&](const std::string& v, int l) {
             cfg.initial.support_radius = to_double(v, l, "initial.support_radius");
         }},
        {"initial.amplitude",
         [&](const std::string& v, int l) {
             cfg.initial.amplitude = to_double(v, l, "initial.amplitude");
         }},
        {"time.horizon",
         [&](const std::string& v, int l) { cfg.horizon = to_double(v, l, "time.horizon"); }},
        {"time.dt",
         [&](const std::string& v, int l) {
             cfg.dt = (v == "auto") ? 0.0 : to_double(v, l, "time.dt");
         }},
        {"time.max_dt",
         [&](const std::string& v, int l) {
             cfg.max_dt = (v == "none") ? 0.0 : to_double(v, l, "time.max_dt");
         }},
        {"time.cfl_safety",
         [&](const std::string& v, int l) { cfg.cfl_safety = to_double(v, l, "time.cfl_safety"); }},
        {"time.semi_implicit",
         [&](const std::string& v, int l) {
             cfg.semi_implicit = to_bool(v, l, "time.semi_implicit");
         }},
        {"time.sample_stride",
         [&](const std::string& v, int l) {
             cfg.sample_stride = static_cast<int>(to_int(v, l, "time.sample_stride"));
         }},
        {"time.dissipation_stride",
         [&](const std::string& v, int l) {
             cfg.dissipation_stride = static_cast<int>(to_int(v, l, "time.dissipation_stride"));
         }},
        {"checks.enable",
         [&](const std::string& v, int l) {
             cfg.checks.clear();
             if (v == "none") return;
             for (const auto& name : split_list(v)) {
                 if (std::find(known_checks().begin(), known_checks().end(), name) ==
                     known_checks().end())
                     fail_line(l, "unknown check '" + name + "' (" + join(known_checks()) + ")");
                 if (std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end())
                     fail_line(l, "duplicate check '" + name + "'");
                 cfg.checks.push_back(name);
             }
         }},
        {"output.dir", [&](const std::string& v, int) { cfg.out_dir = v; }},
        {"output.snapshots",
         [&](const std::string& v, int l) {
             cfg.snapshot_times.clear();
             if (v == "none") return;
             for (const auto& item : split_list(v))
                 cfg.snapshot_times.push_back(to_double(item, l, "output.snapshots"));
         }},
        {"seed", [&](const std::string& v, int l) { cfg.seed = to_u64(v, l, "seed"); }},
    };

    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text[0] == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) fail_line(line, "expected key = value, got '" + text + "'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) fail_line(line, "missing key before '='");
        auto it = handlers.find(key);
        if (it == handlers.end()) fail_line(line, "unknown key '" + key + "'");
        if (!seen.insert(key).second) fail_line(line, "duplicate key '" + key + "'");
        if (value.empty()) fail_line(line, "missing value for " + key);
        it->second(value, line);
    }
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config '" + path.string() + "'");
    try {
        return parse_config(in);
    } catch (const input_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

void validate_config(const RunConfig& cfg) {
    auto fail = [](const std::string& msg) { throw input_error("config: " + msg); };
    if (cfg.n < 4 || cfg.n % 2 != 0) fail("grid.n must be even and >= 4, got " + std::to_string(cfg.n));
    if (!std::isfinite(cfg.extent) || cfg.extent <= 0.0) fail("grid.extent must be positive");
    if (!(cfg.gamma >= -3.0 && cfg.gamma < -2.0))
        fail("kernel.gamma must be in [-3, -2), got " + format_double(cfg.gamma));
    if (cfg.epsilon >= 0.0 && !std::isfinite(cfg.epsilon)) fail("kernel.epsilon must be finite");
    if (!std::isfinite(cfg.initial.mass) || cfg.initial.mass <= 0.0)
        fail("initial.mass must be positive");
    if (!std::isfinite(cfg.initial.temperature) || cfg.initial.temperature <= 0.0)
        fail("initial.temperature must be positive");
    if (!cfg.initial.mean.allFinite()) fail("initial.mean must be finite");
    if (!std::isfinite(cfg.initial.support_radius) || cfg.initial.support_radius <= 0.0)
        fail("initial.support_radius must be positive");
    if (!(std::abs(cfg.initial.amplitude) < 1.0)) fail("initial.amplitude must satisfy |a| < 1");
    if (!std::isfinite(cfg.horizon) || cfg.horizon <= 0.0) fail("time.horizon must be positive");
    if (!std::isfinite(cfg.dt) || cfg.dt < 0.0) fail("time.dt must be positive or auto");
    if (!std::isfinite(cfg.max_dt) || cfg.max_dt < 0.0) fail("time.max_dt must be positive or none");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) fail("time.cfl_safety must be in (0, 1]");
    if (cfg.sample_stride < 1) fail("time.sample_stride must be >= 1");
    if (cfg.dissipation_stride < 1) fail("time.dissipation_stride must be >= 1");
    for (const auto& name : cfg.checks)
        if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
            fail("unknown check '" + name + "'");
    if (cfg.out_dir.empty()) fail("output.dir must be non-empty");
    for (double t : cfg.snapshot_times)
        if (!std::isfinite(t) || t < 0.0) fail("output.snapshots times must be >= 0");
}

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::logic_error("format_double: to_chars failed");
    return std::string(buf, p);
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    auto kv = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    auto v3 = [](const Eigen::Vector3d& v) {
        return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
    };
    kv("grid.n", std::to_string(cfg.n));
    kv("grid.extent", format_double(cfg.extent));
    kv("kernel.gamma", format_double(cfg.gamma));
    kv("kernel.epsilon", cfg.epsilon < 0.0 ? "auto" : format_double(cfg.epsilon));
    kv("kernel.cutoff", cfg.cutoff_columns ? "on" : "off");
    kv("initial.kind", to_string(cfg.initial.kind));
    kv("initial.mass", format_double(cfg.initial.mass));
    kv("initial.temperature", format_double(cfg.initial.temperature));
    kv("initial.mean", v3(cfg.initial.mean));
    kv("initial.support_radius", format_double(cfg.initial.support_radius));
    kv("initial.amplitude", format_double(cfg.initial.amplitude));
    kv("time.horizon", format_double(cfg.horizon));
    kv("time.dt", cfg.dt == 0.0 ? "auto" : format_double(cfg.dt));
    kv("time.max_dt", cfg.max_dt == 0.0 ? "none" : format_double(cfg.max_dt));
    kv("time.cfl_safety", format_double(cfg.cfl_safety));
    kv("time.semi_implicit", cfg.semi_implicit ? "on" : "off");
    kv("time.sample_stride", std::to_string(cfg.sample_stride));
    kv("time.dissipation_stride", std::to_string(cfg.dissipation_stride));
    kv("checks.enable", cfg.checks.empty() ? "none" : join(cfg.checks));
    kv("output.dir", cfg.out_dir);
    if (cfg.snapshot_times.empty()) {
        kv("output.snapshots", "none");
    } else {
        std::vector<std::string> items;
        items.reserve(cfg.snapshot_times.size());
        for (double t : cfg.snapshot_times) items.push_back(format_double(t));
        kv("output.snapshots", join(items));
    }
    kv("seed", std::to_string(cfg.seed));
    return out;
}

namespace {

constexpr char kMagic[5] = {'L', 'F', 'S', 'H', '1'};
constexpr std::size_t kHeaderBytes = 5 + 4 + 4 + 8 + 8 + 8;

template <class T>
void append_raw(std::string& buf, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.append(bytes, sizeof(T));
}

template <class T>
T read_raw(const std::string& buf, std::size_t& pos) {
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

} // namespace

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    if (snap.values.size() != snap.grid.cells())
        throw std::logic_error("save_snapshot: value count does not match the grid");
    std::string buf;
    buf.reserve(kHeaderBytes + snap.values.size() * sizeof(double));
    buf.append(kMagic, sizeof(kMagic));
    append_raw(buf, kSnapshotByteOrderTag);
    append_raw(buf, static_cast<std::uint32_t>(snap.grid.n));
    append_raw(buf, snap.grid.extent);
    append_raw(buf, snap.gamma);
    append_raw(buf, snap.time);
    buf.append(reinterpret_cast<const char*>(snap.values.data()),
               snap.values.size() * sizeof(double));
    atomic_write(path, buf);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open snapshot '" + path.string() + "'");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string where = "snapshot '" + path.string() + "'";
    if (buf.size() < kHeaderBytes) throw input_error(where + ": truncated header");
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw input_error(where + ": bad magic, not an LFSH1 file");
    std::size_t pos = sizeof(kMagic);
    const auto tag = read_raw<std::uint32_t>(buf, pos);
    if (tag == 0x04030201u)
        throw input_error(where + ": written with the opposite byte order, refusing to load");
    if (tag != kSnapshotByteOrderTag)
        throw input_error(where + ": unrecognized byte-order tag");
    const auto n = read_raw<std::uint32_t>(buf, pos);
    if (n < 4 || n > 4096 || n % 2 != 0)
        throw input_error(where + ": implausible grid size n = " + std::to_string(n));
    Snapshot snap;
    const double extent = read_raw<double>(buf, pos);
    snap.gamma = read_raw<double>(buf, pos);
    snap.time = read_raw<double>(buf, pos);
    if (!std::isfinite(extent) || extent <= 0.0)
        throw input_error(where + ": invalid grid extent");
    if (!std::isfinite(snap.gamma) || !std::isfinite(snap.time))
        throw input_error(where + ": non-finite header fields");
    snap.grid = make_grid(static_cast<int>(n), extent);
    const std::size_t expect = kHeaderBytes + snap.grid.cells() * sizeof(double);
    if (buf.size() < expect) throw input_error(where + ": truncated payload");
    if (buf.size() > expect) throw input_error(where + ": trailing bytes after payload");
    snap.values.resize(snap.grid.cells());
    std::memcpy(snap.values.data(), buf.data() + pos, snap.values.size() * sizeof(double));
    return snap;
}

std::string series_csv(const TrajectoryRecord& traj, bool cutoff_columns) {
    const bool any_diss =
        std::any_of(traj.samples.begin(), traj.samples.end(),
                    [](const TrajectorySample& s) { return s.has_dissipation; });
    std::string out = "t,mass,px,py,pz,energy,entropy,llogl,fisher,linf";
    if (any_diss) {
        out += ",entropy_dissipation,d_par,d_rad,d_sph,r_sph,fisher_dissipation_total";
        if (cutoff_columns) out += ",d_par_cut,d_rad_cut,d_sph_cut,r_sph_cut,j1,j2";
    }
    out += '\n';
    for (const auto& s : traj.samples) {
        out += format_double(s.t);
        for (double x : {s.hydro.mass, s.hydro.momentum.x(), s.hydro.momentum.y(),
                         s.hydro.momentum.z(), s.hydro.energy, s.hydro.entropy, s.l_log_l,
                         s.fisher, s.linf}) {
            out += ',';
            out += format_double(x);
        }
        if (any_diss) {
            const int extra = cutoff_columns ? 12 : 6;
            if (s.has_dissipation) {
                const auto& d = s.dissipation;
                std::vector<double> cols = {d.entropy_dissipation, d.d_par, d.d_rad,
                                            d.d_sph, d.r_sph, d.fisher_dissipation_total};
                if (cutoff_columns) {
                    for (double x : {d.d_par_cut, d.d_rad_cut, d.d_sph_cut, d.r_sph_cut, d.j1,
                                     d.j2})
                        cols.push_back(x);
                }
                for (double x : cols) {
                    out += ',';
                    out += format_double(x);
                }
            } else {
                for (int i = 0; i < extra; ++i) out += ',';
            }
        }
        out += '\n';
    }
    return out;
}

void Summary::add(const std::string& key, const std::string& value) {
    rows.emplace_back(key, value);
}

void Summary::add(const std::string& key, double value) { rows.emplace_back(key, format_double(value)); }

void Summary::add(const std::string& key, std::uint64_t value) {
    rows.emplace_back(key, std::to_string(value));
}

void Summary::add_flag(const std::string& key, bool pass) {
    rows.emplace_back(key, pass ? "PASS" : "FAIL");
}

std::string Summary::text() const {
    std::string out;
    for (const auto& [key, value] : rows) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot write '" + tmp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw input_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace landau

#include "fjko/io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fjko {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

using ordered_json = nlohmann::ordered_json;

std::string state_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "state_%05d.fjko", k);
    return buf;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Density& u, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
    out.write(kSnapshotMagic, 8);
    const std::uint32_t d = static_cast<std::uint32_t>(u.grid.d);
    const std::uint32_t n = static_cast<std::uint32_t>(u.grid.n);
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&u.grid.length), 8);
    out.write(reinterpret_cast<const char*>(&time), 8);
    out.write(reinterpret_cast<const char*>(u.values.data()),
              static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_snapshot: short write to " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kSnapshotMagic, 8) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path.string());
    std::uint32_t d = 0, n = 0;
    double L = 0.0, time = 0.0;
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    in.read(reinterpret_cast<char*>(&time), 8);
    Grid grid(static_cast<int>(d), static_cast<int>(n), L);
    Field values(grid.size());
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_snapshot: truncated file " + path.string());
    return Snapshot{Density(grid, std::move(values)), time};
}

std::string summary_json(const Trajectory& traj) {
    const RunConfig& c = traj.config;
    ordered_json j;
    j["version"] = kCodeVersion;
    ordered_json cfg;
    cfg["alpha"] = c.alpha;
    cfg["equation"] = c.linear ? "linear" : "nonlinear";
    if (!c.linear) cfg["beta"] = c.beta;
    cfg["s"] = c.s;
    cfg["d"] = c.d;
    cfg["n"] = c.n;
    cfg["L"] = c.length;
    cfg["tau"] = c.tau;
    cfg["T"] = c.T;
    cfg["transport.M"] = c.transport.M;
    cfg["transport.tol"] = c.transport.tol;
    cfg["transport.max_iter"] = c.transport.max_iter;
    cfg["solver"] = c.solver;
    cfg["seed"] = c.seed;
    j["config"] = cfg;
    ordered_json steps = ordered_json::array();
    for (const StepDiagnostics& d : traj.diagnostics) {
        ordered_json row;
        row["step"] = d.step;
        row["time"] = d.time;
        row["w2m"] = d.w2m;
        row["energy_hms"] = d.energy_hms;
        row["energy_h1ms"] = d.energy_h1ms;
        row["lp1"] = d.lp1;
        row["lp2"] = d.lp2;
        row["lp4"] = d.lp4;
        row["lpinf"] = d.lpinf;
        row["mass"] = d.mass;
        row["converged"] = d.converged;
        row["wall_ms"] = d.wall_ms;
        steps.push_back(row);
    }
    j["steps"] = steps;
    return j.dump(2) + "\n";
}

std::string diagnostics_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "step,time,w2m,energy_hms,energy_h1ms,lp1,lp2,lp4,lpinf,mass,converged,wall_ms\n";
    out.precision(17);
    for (const StepDiagnostics& d : traj.diagnostics)
        out << d.step << ',' << d.time << ',' << d.w2m << ',' << d.energy_hms << ','
            << d.energy_h1ms << ',' << d.lp1 << ',' << d.lp2 << ',' << d.lp4 << ',' << d.lpinf
            << ',' << d.mass << ',' << (d.converged ? 1 : 0) << ',' << d.wall_ms << '\n';
    return out.str();
}

void write_run_outputs(const std::filesystem::path& dir, const Trajectory& traj) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        write_snapshot(dir / state_name(static_cast<int>(k)), traj.states[k],
                       traj.diagnostics[k].time);
    std::ofstream(dir / "summary.json") << summary_json(traj);
    std::ofstream(dir / "diagnostics.csv") << diagnostics_csv(traj);
}

Trajectory read_run_outputs(const std::filesystem::path& dir) {
    std::ifstream in(dir / "summary.json");
    if (!in) throw std::runtime_error("read_run_outputs: missing summary.json in " + dir.string());
    ordered_json j = ordered_json::parse(in);

    Trajectory traj;
    const auto& cfg = j.at("config");
    RunConfig& c = traj.config;
    c.alpha = cfg.at("alpha").get<double>();
    c.linear = cfg.at("equation").get<std::string>() == "linear";
    if (cfg.contains("beta")) c.beta = cfg.at("beta").get<double>();
    c.s = cfg.at("s").get<double>();
    c.d = cfg.at("d").get<int>();
    c.n = cfg.at("n").get<int>();
    c.length = cfg.at("L").get<double>();
    c.tau = cfg.at("tau").get<double>();
    c.T = cfg.at("T").get<double>();
    c.transport.M = cfg.at("transport.M").get<int>();
    c.transport.tol = cfg.at("transport.tol").get<double>();
    c.transport.max_iter = cfg.at("transport.max_iter").get<int>();
    c.solver = cfg.at("solver").get<std::string>();
    c.seed = cfg.at("seed").get<std::uint64_t>();
    c.validate();

    for (const auto& row : j.at("steps")) {
        StepDiagnostics d;
        d.step = row.at("step").get<int>();
        d.time = row.at("time").get<double>();
        d.w2m = row.at("w2m").get<double>();
        d.energy_hms = row.at("energy_hms").get<double>();
        d.energy_h1ms = row.at("energy_h1ms").get<double>();
        d.lp1 = row.at("lp1").get<double>();
        d.lp2 = row.at("lp2").get<double>();
        d.lp4 = row.at("lp4").get<double>();
        d.lpinf = row.at("lpinf").get<double>();
        d.mass = row.at("mass").get<double>();
        d.converged = row.at("converged").get<bool>();
        d.wall_ms = row.at("wall_ms").get<double>();
        traj.diagnostics.push_back(d);
    }
    for (std::size_t k = 0; k < traj.diagnostics.size(); ++k)
        traj.states.push_back(read_snapshot(dir / state_name(static_cast<int>(k))).density);
    return traj;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    bool beta_set = false;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "alpha") c.alpha = std::stod(val);
            else if (key == "beta") { c.beta = std::stod(val); beta_set = true; }
            else if (key == "equation") {
                if (val != "linear" && val != "nonlinear")
                    throw std::invalid_argument("equation must be linear or nonlinear");
                c.linear = (val == "linear");
            }
            else if (key == "s") c.s = std::stod(val);
            else if (key == "d") c.d = std::stoi(val);
            else if (key == "n") c.n = std::stoi(val);
            else if (key == "L") c.length = std::stod(val);
            else if (key == "tau") c.tau = std::stod(val);
            else if (key == "T") c.T = std::stod(val);
            else if (key == "transport.M") c.transport.M = std::stoi(val);
            else if (key == "transport.tol") c.transport.tol = std::stod(val);
            else if (key == "transport.max_iter") c.transport.max_iter = std::stoi(val);
            else if (key == "solver") c.solver = val;
            else if (key == "seed") c.seed = std::stoull(val);
            else throw std::invalid_argument("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config key " + key + ": cannot parse value '" + val + "'");
        }
    }
    if (c.linear && beta_set)
        throw std::invalid_argument("config key beta: not allowed with equation=linear");
    c.validate();
    return c;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace fjko

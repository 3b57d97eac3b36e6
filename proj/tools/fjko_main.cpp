// fjko: time-fractional porous-medium solver via mobility-weighted JKO steps.
// Subcommands: run (solve + snapshots), check (estimate report), compare (gap table).
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "fjko/io.hpp"
#include "fjko/reference.hpp"
#include "fjko/spectral.hpp"
#include "fjko/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& solver_override) {
    fjko::RunConfig cfg = fjko::parse_config_file(config_path);
    if (!solver_override.empty()) {
        cfg.solver = solver_override;
        cfg.validate();
    }
    const fjko::Grid grid = cfg.make_grid();
    const fjko::Density u0 = fjko::default_initial_density(grid);
    const fjko::Trajectory traj =
        cfg.solver == "reference" ? fjko::run_reference(cfg, u0) : fjko::run(cfg, u0);
    fjko::write_run_outputs(out_dir, traj);
    std::cout << "wrote " << traj.states.size() << " snapshots to " << out_dir << "\n";
    return traj.all_converged() ? 0 : 2;
}

int cmd_check(const std::string& traj_dir) {
    const fjko::Trajectory traj = fjko::read_run_outputs(traj_dir);
    const fjko::Grid grid = traj.config.make_grid();
    const fjko::EstimateReport rep = fjko::check_estimates(traj);

    const fjko::Field phi = fjko::bump_field(
        grid, std::vector<double>(grid.d, 0.5 * grid.length), grid.length / 6.0);
    const fjko::EquationForm form =
        traj.config.linear ? fjko::EquationForm::Linear : fjko::EquationForm::Nonlinear;

    ordered_json out;
    out["version"] = fjko::kCodeVersion;
    out["sobolev_ratio"] = rep.sobolev_ratio;
    ordered_json checks = ordered_json::array();
    for (const fjko::EstimateCheck& c : rep.checks) {
        ordered_json row;
        row["name"] = c.name;
        row["lhs"] = c.lhs;
        row["rhs"] = c.rhs;
        row["margin"] = c.margin;
        row["pass"] = c.pass;
        checks.push_back(row);
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  lhs=" << c.lhs
                  << " rhs=" << c.rhs << " margin=" << c.margin << "\n";
    }
    out["checks"] = checks;
    ordered_json residuals = ordered_json::array();
    for (int m = 1; m <= 3; ++m) {
        const double r = fjko::weak_residual(traj, phi, m, form);
        ordered_json row;
        row["psi_m"] = m;
        row["residual"] = r;
        residuals.push_back(row);
        std::cout << "weak residual (psi m=" << m << "): " << r << "\n";
    }
    out["weak_residuals"] = residuals;
    std::ofstream(fs::path(traj_dir) / "report.json") << out.dump(2) << "\n";
    return rep.all_pass() ? 0 : 2;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, const std::string& out_csv) {
    const fjko::Trajectory a = fjko::read_run_outputs(dir_a);
    const fjko::Trajectory b = fjko::read_run_outputs(dir_b);
    const fjko::Grid ga = a.config.make_grid();
    const fjko::Grid gb = b.config.make_grid();
    if (ga.d != gb.d || ga.length != gb.length)
        throw std::invalid_argument("compare: runs live on incompatible domains");

    std::ostringstream csv;
    csv.precision(17);
    csv << "time,l1,l2,hms\n";
    const double t_end = std::min(a.config.T, b.config.T);
    for (const fjko::StepDiagnostics& d : a.diagnostics) {
        if (d.time > t_end * (1.0 + 1e-12)) break;
        const fjko::Density& ua = fjko::interpolate(a, d.time);
        const fjko::Density& ub = fjko::interpolate(b, d.time);
        fjko::Field vb = ub.values;
        if (gb.n != ga.n) vb = fjko::resample(gb, vb, ga);
        fjko::Field diff = ua.values;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= vb[i];
        csv << d.time << ',' << fjko::lp_norm(ga, diff, 1.0) << ','
            << fjko::lp_norm(ga, diff, 2.0) << ','
            << std::sqrt(fjko::sobolev_norm_sq(ga, diff, -a.config.s)) << '\n';
    }
    std::cout << csv.str();
    if (!out_csv.empty()) std::ofstream(out_csv) << csv.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-fractional porous-medium JKO solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir, solver_override;
    CLI::App* run = app.add_subcommand("run", "solve a config and write snapshots + summary");
    run->add_option("config", config_path, "key=value config file")->required();
    run->add_option("out", out_dir, "output directory")->required();
    run->add_option("--solver", solver_override, "override the solver key (jko|reference)");

    std::string traj_dir;
    CLI::App* check = app.add_subcommand("check", "verify estimates on a finished run");
    check->add_option("dir", traj_dir, "run directory")->required();

    std::string dir_a, dir_b, out_csv;
    CLI::App* compare = app.add_subcommand("compare", "gap table between two runs");
    compare->add_option("dir_a", dir_a)->required();
    compare->add_option("dir_b", dir_b)->required();
    compare->add_option("--out", out_csv, "also write the CSV here");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, solver_override);
        if (check->parsed()) return cmd_check(traj_dir);
        if (compare->parsed()) return cmd_compare(dir_a, dir_b, out_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

#include "fjko/reference.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fjko/gamma.hpp"
#include "fjko/spectral.hpp"

namespace fjko {

namespace {

void check_s(double s, int d) {
    const double cap = std::min(1.0, 0.5 * d);
    if (!(s > 0.0 && s < cap)) throw std::invalid_argument("s must satisfy s < min(1, d/2)");
}

double max_abs(const Field& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double xi_max_pow(const Grid& grid, double s) {
    const double xi_max = std::numbers::pi * grid.n / grid.length;
    return std::pow(xi_max, 2.0 - 2.0 * s);
}

}  // namespace

Density step_linear(const History& history, double alpha, double s, double c) {
    check_s(s, history.grid().d);
    if (!(c > 0.0)) throw std::invalid_argument("step_linear: c must be positive");
    const int k = history.count();
    const L1Weights w = l1_weights(k, alpha);
    const Density ubar = history_combination(history, w);
    const Grid& grid = ubar.grid;

    const double coef = std::pow(history.tau, alpha) * c / w.c_alpha;
    Spectrum uhat = fft_forward(grid, ubar.values);
    const std::vector<double> fsq = mode_freq_sq(grid);
    for (std::size_t i = 0; i < uhat.size(); ++i)
        if (fsq[i] != 0.0) uhat[i] /= 1.0 + coef * std::pow(fsq[i], 1.0 - s);
    return Density(grid, fft_inverse(grid, uhat));
}

int default_substeps(const History& history, double alpha, double beta, double s) {
    const Density& current = history.steps.back();
    const double total = std::pow(history.tau, alpha) / c_alpha(alpha);
    const double rate = std::pow(max_abs(current.values), beta) * xi_max_pow(current.grid, s);
    return std::max(1, static_cast<int>(std::ceil(total * rate / 0.2)));
}

Density step_nonlinear(const History& history, double alpha, double beta, double s,
                       int n_substeps) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("step_nonlinear: beta in (0,1]");
    check_s(s, history.grid().d);
    const int k = history.count();
    const Density ubar = history_combination(history, l1_weights(k, alpha));
    const Grid& grid = ubar.grid;
    const double total = std::pow(history.tau, alpha) / c_alpha(alpha);
    const double xipow = xi_max_pow(grid, s);

    int nsub = n_substeps > 0 ? n_substeps : default_substeps(history, alpha, beta, s);
    constexpr int kCap = 1 << 20;
    while (true) {
        if (nsub > kCap) throw std::runtime_error("step_nonlinear: CFL refinement cap exceeded");
        const double dth = total / nsub;
        Field v = ubar.values;
        bool ok = true;
        for (int step = 0; step < nsub; ++step) {
            if (dth * std::pow(max_abs(v), beta) * xipow > 0.2 * (1.0 + 1e-9)) {
                ok = false;
                break;
            }
            // the flux sees the nonnegative part, so spectral ringing into
            // vacuum cannot feed back through u^beta
            Field clamped = v;
            for (double& x : clamped) x = std::max(x, 0.0);
            const Field rhs = divergence(grid, nonlocal_flux(grid, clamped, beta, s));
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += dth * rhs[i];
        }
        if (ok) {
            // explicit stages may leave harmless sub-1e-9 undershoots near vacuum
            for (double& x : v)
                if (x < 0.0 && x > -1e-9) x = 0.0;
            return Density(grid, std::move(v));
        }
        nsub *= 2;
    }
}

Trajectory run_reference(const RunConfig& config, const Density& u0) {
    config.validate();
    if (u0.grid != config.make_grid())
        throw std::invalid_argument("run_reference: u0 grid does not match config");
    const int N = config.steps();

    Trajectory traj;
    traj.config = config;
    traj.config.solver = "reference";
    traj.states.push_back(u0);

    auto diag_for = [&](const Density& u, int step, double wall, double mass) {
        StepDiagnostics d;
        d.step = step;
        d.time = step * config.tau;
        d.energy_hms = 0.5 * sobolev_norm_sq(u.grid, u.values, -config.s);
        d.energy_h1ms = sobolev_norm_sq(u.grid, u.values, 1.0 - config.s);
        d.lp1 = lp_norm(u.grid, u.values, 1.0);
        d.lp2 = lp_norm(u.grid, u.values, 2.0);
        d.lp4 = lp_norm(u.grid, u.values, 4.0);
        d.lpinf = lp_norm(u.grid, u.values, std::numeric_limits<double>::infinity());
        d.mass = mass;
        d.wall_ms = wall;
        return d;
    };
    traj.diagnostics.push_back(diag_for(u0, 0, 0.0, u0.mass()));

    for (int k = 1; k <= N; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        History h(config.tau, traj.states);
        Density u = config.linear ? step_linear(h, config.alpha, config.s, 1.0)
                                  : step_nonlinear(h, config.alpha, config.beta, config.s);
        const auto t1 = std::chrono::steady_clock::now();
        const double raw_mass = u.mass();
        if (std::abs(raw_mass - 1.0) > 1e-6)
            throw std::runtime_error("run_reference: step " + std::to_string(k) + " lost mass");
        traj.diagnostics.push_back(diag_for(
            u, k, std::chrono::duration<double, std::milli>(t1 - t0).count(), raw_mass));
        traj.states.push_back(std::move(u));
    }
    return traj;
}

}  // namespace fjko

#include "fjko/jko.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fjko/spectral.hpp"

namespace fjko {

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!linear && !(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in (0,1]");
    Grid g(d, n, length);  // validates d, n, L
    const double cap = std::min(1.0, 0.5 * d);
    if (!(s > 0.0 && s < cap)) throw std::invalid_argument("s must satisfy s < min(1, d/2)");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    const double ratio = T / tau;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0)
        throw std::invalid_argument("T/tau must be a positive integer");
    if (transport.M < 1) throw std::invalid_argument("transport.M must be >= 1");
    if (!(transport.tol > 0.0)) throw std::invalid_argument("transport.tol must be positive");
    if (transport.max_iter < 1) throw std::invalid_argument("transport.max_iter must be >= 1");
    if (solver != "jko" && solver != "reference")
        throw std::invalid_argument("solver must be jko or reference");
}

int RunConfig::steps() const { return static_cast<int>(std::round(T / tau)); }

MobilitySpec RunConfig::mobility() const {
    return linear ? MobilitySpec::for_linear_equation(alpha, tau)
                  : MobilitySpec::for_porous_equation(beta, alpha, tau);
}

bool Trajectory::all_converged() const {
    for (const StepDiagnostics& d : diagnostics)
        if (!d.converged) return false;
    return true;
}

namespace {

StepDiagnostics diagnostics_for(const Density& u, const RunConfig& cfg, int step) {
    StepDiagnostics d;
    d.step = step;
    d.time = step * cfg.tau;
    d.energy_hms = 0.5 * sobolev_norm_sq(u.grid, u.values, -cfg.s);
    d.energy_h1ms = sobolev_norm_sq(u.grid, u.values, 1.0 - cfg.s);
    d.lp1 = lp_norm(u.grid, u.values, 1.0);
    d.lp2 = lp_norm(u.grid, u.values, 2.0);
    d.lp4 = lp_norm(u.grid, u.values, 4.0);
    d.lpinf = lp_norm(u.grid, u.values, std::numeric_limits<double>::infinity());
    d.mass = u.mass();
    return d;
}

}  // namespace

Trajectory run(const RunConfig& config, const Density& u0) {
    config.validate();
    if (u0.grid != config.make_grid()) throw std::invalid_argument("run: u0 grid does not match config");

    const MobilitySpec spec = config.mobility();
    const int N = config.steps();
    TransportOptions opt{config.transport.M, config.transport.tol, config.transport.max_iter};

    Trajectory traj;
    traj.config = config;
    traj.states.reserve(N + 1);
    traj.states.push_back(u0);
    traj.diagnostics.push_back(diagnostics_for(u0, config, 0));

    for (int k = 1; k <= N; ++k) {
        const L1Weights w = l1_weights(k, config.alpha);
        const Density ubar = history_combination(History(config.tau, traj.states), w);

        const auto t0 = std::chrono::steady_clock::now();
        JkoStepResult res = jko_step(ubar, spec, config.tau, config.alpha, config.s, opt);
        const auto t1 = std::chrono::steady_clock::now();

        // the candidate u = ubar is feasible, so the minimizer must do at
        // least as well; a worse value means the transport solve diverged
        const double feasible = 0.5 * sobolev_norm_sq(u0.grid, ubar.values, -config.s);
        if (res.objective > feasible * (1.0 + 1e-6) + 1e-12)
            throw std::runtime_error("run: step " + std::to_string(k) +
                                     " ended above the trivial candidate objective");
        if (std::abs(res.raw_mass - 1.0) > 1e-6)
            throw std::runtime_error("run: step " + std::to_string(k) + " lost more than 1e-6 mass");

        StepDiagnostics d = diagnostics_for(res.u, config, k);
        d.w2m = res.w2_sq;
        d.mass = res.raw_mass;
        d.converged = res.converged;
        d.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        traj.states.push_back(std::move(res.u));
        traj.diagnostics.push_back(d);
    }
    return traj;
}

const Density& interpolate(const Trajectory& traj, double t) {
    const double tau = traj.config.tau;
    const double T = traj.config.T;
    if (t < 0.0 || t > T * (1.0 + 1e-12)) throw std::invalid_argument("interpolate: t outside [0, T]");
    if (t <= 0.0) return traj.states.front();
    const double x = t / tau;
    // right-open convention: u^k on ((k-1) tau, k tau]; the relative slack
    // keeps exact nodes on their own step against FP division noise
    int k = static_cast<int>(std::ceil(x * (1.0 - 8.0 * std::numeric_limits<double>::epsilon())));
    k = std::max(1, std::min<int>(k, static_cast<int>(traj.states.size()) - 1));
    return traj.states[static_cast<std::size_t>(k)];
}

}  // namespace fjko

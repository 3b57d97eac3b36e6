#pragma once

#include "fjko/caputo.hpp"
#include "fjko/jko.hpp"

namespace fjko {

/// Exact per-mode solve of the L1 semi-implicit step for
/// d^alpha_t u = -c (-Laplace)^{1-s} u:
///   u_hat^k = ubar_hat^{k-1} / (1 + (tau^alpha c / C_alpha) |xi|^{2-2s}).
/// This is also the exact minimizer of the constant-mobility JKO step.
Density step_linear(const History& history, double alpha, double s, double c);

/// One outer L1 step of the nonlinear equation by sub-cycled forward Euler on
/// the equivalent integer-order update dv/dtheta = div(v^beta grad (-Lap)^{-s} v),
/// theta in [0, tau^alpha / C_alpha]. n_substeps = 0 picks the CFL-safe count;
/// a violation mid-integration doubles the count, up to a cap.
Density step_nonlinear(const History& history, double alpha, double beta, double s,
                       int n_substeps = 0);

/// CFL-safe substep count for the data currently at the end of the history.
int default_substeps(const History& history, double alpha, double beta, double s);

/// Reference trajectory in the same format as jko::run (w2m reported as 0).
Trajectory run_reference(const RunConfig& config, const Density& u0);

}  // namespace fjko

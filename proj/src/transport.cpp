#include "fjko/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fjko/gamma.hpp"
#include "fjko/spectral.hpp"

namespace fjko {

namespace {

void check_positive_mobility(const MobilitySpec& spec) {
    if (!(spec.inf_value() > 0.0))
        throw std::invalid_argument("transport: mobility must satisfy inf m > 0");
}

double mobility_second_derivative(const MobilitySpec& spec, double z) {
    switch (spec.kind()) {
        case MobilityKind::PorousBeta: {
            const double beta = spec.param1();
            if (beta == 1.0) return 0.0;
            return beta * (beta - 1.0) * std::pow(z + spec.param2(), beta - 2.0);
        }
        case MobilityKind::ExponentOne: {
            const double eps = spec.param1();
            return eps * (eps - 1.0) * std::pow(z + 1.0, eps - 2.0);
        }
        case MobilityKind::Constant: return 0.0;
    }
    return 0.0;
}

/// Solve the symmetric tridiagonal system (diag, off = -1/dt^2) in place.
/// diag has size M, rhs complex of size M.
void thomas_solve(const std::vector<double>& diag, double off, std::vector<Complex>& rhs) {
    const int m = static_cast<int>(diag.size());
    static thread_local std::vector<double> c;
    c.assign(m, 0.0);
    double piv = diag[0];
    rhs[0] /= piv;
    for (int i = 1; i < m; ++i) {
        c[i - 1] = off / piv;
        piv = diag[i] - off * c[i - 1];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / piv;
    }
    for (int i = m - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
}

struct CpSetup {
    double act_weight = 1.0;  // multiplies the action in the objective
    bool free_end = true;
    double s_exponent = 0.25;  // endpoint energy order (free end only)
};

struct CpOutcome {
    TransportPath path;
    double action = 0.0;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
    PrimalDualState pd;
};

/// |K|^2 for K(rho, nu) = (time-average of rho, nu, [rho_M]): the spatial part
/// is the identity, so the norm is read off an (M+1)x(M+1) time operator.
double operator_norm(int M, bool free_end) {
    std::vector<double> v(M + 1), w(M + 1), a(M);
    for (int i = 0; i <= M; ++i) v[i] = 1.0 / std::sqrt(M + 1.0) * (1.0 + 0.01 * i);
    double lambda = 1.0;
    for (int it = 0; it < 20; ++it) {
        for (int j = 0; j < M; ++j) a[j] = 0.5 * (v[j] + v[j + 1]);
        std::fill(w.begin(), w.end(), 0.0);
        for (int j = 0; j < M; ++j) {
            w[j] += 0.5 * a[j];
            w[j + 1] += 0.5 * a[j];
        }
        if (free_end) w[M] += v[M];
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        lambda = norm;
        for (int i = 0; i <= M; ++i) v[i] = w[i] / norm;
    }
    return std::sqrt(std::max(lambda, 1.0));  // nu branch contributes 1
}

CpOutcome run_primal_dual(const Density& start, const Density* end, const MobilitySpec& spec,
                          const TransportOptions& opt, const CpSetup& setup) {
    check_positive_mobility(spec);
    if (opt.M < 1) throw std::invalid_argument("transport: M must be >= 1");
    const Grid& grid = start.grid;
    const int M = opt.M;
    const int d = grid.d;
    const double dt = 1.0 / M;
    const double vol = grid.cell_volume();
    const std::size_t nn = grid.size();

    PrimalDualState pd;
    pd.op_norm = operator_norm(M, setup.free_end);
    pd.sigma_p = 0.99 / pd.op_norm;
    pd.sigma_d = 0.99 / pd.op_norm;

    TransportPath U = TransportPath::constant(start, M);
    U = project_continuity(std::move(U), start, end);
    TransportPath U_prev = U;

    // dual fields: ya collocated with the time-averaged density, yb with the
    // momenta, ye with the free endpoint
    std::vector<Field> ya(M, Field(nn, 0.0));
    std::vector<std::vector<Field>> yb(M, std::vector<Field>(d, Field(nn, 0.0)));
    Field ye(nn, 0.0);

    // per-mode shrink factors of the endpoint energy prox (lambda = 1/sigma_d)
    std::vector<double> shrink;
    if (setup.free_end) {
        const std::vector<double> fsq = mode_freq_sq(grid);
        shrink.resize(nn);
        for (std::size_t i = 0; i < nn; ++i)
            shrink[i] = fsq[i] == 0.0
                            ? 1.0
                            : 1.0 / (1.0 + vol / pd.sigma_d * std::pow(fsq[i], -setup.s_exponent));
    }

    const double sigma_point = setup.act_weight * dt * vol / pd.sigma_d;
    const int check_every = 10;
    double last_obj = 0.0;
    bool have_last = false;
    int good_checks = 0;
    bool converged = false;
    int iter = 0;

    std::array<double, 2> stilde{0.0, 0.0};
    for (; iter < opt.max_iter; ++iter) {
        // dual ascent on the action coupling (Moreau through prox_action)
        for (int j = 0; j < M; ++j) {
            Field& yaj = ya[j];
            const Field& r0 = U.rho[j];
            const Field& r1 = U.rho[j + 1];
            const Field& p0 = U_prev.rho[j];
            const Field& p1 = U_prev.rho[j + 1];
            for (std::size_t x = 0; x < nn; ++x) {
                const double rbar = 0.5 * ((2.0 * r0[x] - p0[x]) + (2.0 * r1[x] - p1[x]));
                const double wa = yaj[x] + pd.sigma_d * rbar;
                for (int a = 0; a < d; ++a) {
                    const double nbar = 2.0 * U.nu[j][a][x] - U_prev.nu[j][a][x];
                    stilde[a] = (yb[j][a][x] + pd.sigma_d * nbar) / pd.sigma_d;
                }
                const ProxPoint p = prox_action(wa / pd.sigma_d, stilde, d, sigma_point, spec);
                yaj[x] = wa - pd.sigma_d * p.rho;
                for (int a = 0; a < d; ++a)
                    yb[j][a][x] = stilde[a] * pd.sigma_d - pd.sigma_d * p.nu[a];
            }
        }
        if (setup.free_end) {
            Field we(nn);
            for (std::size_t x = 0; x < nn; ++x)
                we[x] = ye[x] + pd.sigma_d * (2.0 * U.rho[M][x] - U_prev.rho[M][x]);
            Spectrum c = fft_forward(grid, we);
            for (std::size_t i = 0; i < nn; ++i) c[i] *= shrink[i];
            const Field pe = fft_inverse(grid, c);
            for (std::size_t x = 0; x < nn; ++x) ye[x] = we[x] - pe[x];
        }

        // primal descent then exact projection onto the continuity set
        U_prev = U;
        for (int j = 0; j <= M; ++j) {
            Field& rj = U.rho[j];
            if (j < M)
                for (std::size_t x = 0; x < nn; ++x) rj[x] -= pd.sigma_p * 0.5 * ya[j][x];
            if (j > 0)
                for (std::size_t x = 0; x < nn; ++x) rj[x] -= pd.sigma_p * 0.5 * ya[j - 1][x];
            if (j == M && setup.free_end)
                for (std::size_t x = 0; x < nn; ++x) rj[x] -= pd.sigma_p * ye[x];
        }
        for (int j = 0; j < M; ++j)
            for (int a = 0; a < d; ++a)
                for (std::size_t x = 0; x < nn; ++x) U.nu[j][a][x] -= pd.sigma_p * yb[j][a][x];
        U = project_continuity(std::move(U), start, end);

        if ((iter + 1) % check_every == 0) {
            double move = 0.0, base = 0.0;
            for (int j = 0; j <= M; ++j)
                for (std::size_t x = 0; x < nn; ++x) {
                    const double dd = U.rho[j][x] - U_prev.rho[j][x];
                    move += dd * dd;
                    base += U.rho[j][x] * U.rho[j][x];
                }
            for (int j = 0; j < M; ++j)
                for (int a = 0; a < d; ++a)
                    for (std::size_t x = 0; x < nn; ++x) {
                        const double dd = U.nu[j][a][x] - U_prev.nu[j][a][x];
                        move += dd * dd;
                        base += U.nu[j][a][x] * U.nu[j][a][x];
                    }
            const double rel_move = std::sqrt(move / std::max(base, 1e-300));
            double obj = setup.act_weight * action_value(U, spec);
            if (setup.free_end) obj += 0.5 * sobolev_norm_sq(grid, U.rho[M], -setup.s_exponent);
            const double rel_change =
                have_last ? std::abs(obj - last_obj) / std::max(std::abs(obj), 1e-30) : 1.0;
            last_obj = obj;
            have_last = true;
            if (rel_move < opt.tol && rel_change < opt.tol) {
                if (++good_checks >= 2) {
                    converged = true;
                    ++iter;
                    break;
                }
            } else {
                good_checks = 0;
            }
        }
    }

    CpOutcome out;
    out.action = action_value(U, spec);
    out.objective = setup.act_weight * out.action;
    if (setup.free_end)
        out.objective += 0.5 * sobolev_norm_sq(grid, U.rho[M], -setup.s_exponent);
    U.action = out.action;
    out.path = std::move(U);
    out.converged = converged;
    out.iterations = iter;
    out.pd = pd;
    return out;
}

}  // namespace

TransportPath TransportPath::constant(const Density& start, int M) {
    TransportPath p;
    p.grid = start.grid;
    p.M = M;
    p.rho.assign(M + 1, start.values);
    p.nu.assign(M, std::vector<Field>(start.grid.d, Field(start.grid.size(), 0.0)));
    return p;
}

double action_value(const TransportPath& path, const MobilitySpec& spec) {
    check_positive_mobility(spec);
    const double dt = 1.0 / path.M;
    const double vol = path.grid.cell_volume();
    const std::size_t nn = path.grid.size();
    double acc = 0.0;
    for (int j = 0; j < path.M; ++j) {
        for (std::size_t x = 0; x < nn; ++x) {
            const double rbar = std::max(0.5 * (path.rho[j][x] + path.rho[j + 1][x]), 0.0);
            double s2 = 0.0;
            for (int a = 0; a < path.grid.d; ++a) s2 += path.nu[j][a][x] * path.nu[j][a][x];
            acc += s2 / spec(rbar);
        }
    }
    return acc * dt * vol;
}

TransportPath project_continuity(TransportPath path, const Density& start, const Density* end) {
    const Grid& grid = path.grid;
    const int M = path.M;
    const int d = grid.d;
    const double dt = 1.0 / M;
    const std::size_t nn = grid.size();
    if (start.grid != grid || (end && end->grid != grid))
        throw std::invalid_argument("project_continuity: grid mismatch");
    if (static_cast<int>(path.rho.size()) != M + 1 || static_cast<int>(path.nu.size()) != M)
        throw std::invalid_argument("project_continuity: malformed path");

    path.rho[0] = start.values;
    if (end) path.rho[M] = end->values;
    const bool end_free = (end == nullptr);

    // spectra of all layers
    std::vector<Spectrum> rho_hat(M + 1);
    for (int j = 0; j <= M; ++j) rho_hat[j] = fft_forward(grid, path.rho[j]);
    std::vector<std::vector<Spectrum>> nu_hat(M);
    std::vector<Spectrum> mult(d);
    for (int a = 0; a < d; ++a) mult[a] = deriv_multiplier(grid, a);
    for (int j = 0; j < M; ++j) {
        nu_hat[j].resize(d);
        for (int a = 0; a < d; ++a) nu_hat[j][a] = fft_forward(grid, path.nu[j][a]);
    }

    // residual of the continuity constraints
    std::vector<Spectrum> res(M, Spectrum(nn));
    for (int j = 0; j < M; ++j)
        for (std::size_t i = 0; i < nn; ++i) {
            Complex r = (rho_hat[j + 1][i] - rho_hat[j][i]) / dt;
            for (int a = 0; a < d; ++a) r += mult[a][i] * nu_hat[j][a][i];
            res[j][i] = r;
        }

    // multipliers: per spatial mode, tridiagonal solve in transport time
    std::vector<double> musq(nn, 0.0);
    for (int a = 0; a < d; ++a)
        for (std::size_t i = 0; i < nn; ++i) musq[i] += std::norm(mult[a][i]);

    std::vector<Spectrum> lam(M, Spectrum(nn, Complex(0.0, 0.0)));
    std::vector<double> diag(M);
    std::vector<Complex> rhs(M);
    const double idt2 = 1.0 / (dt * dt);
    for (std::size_t i = 0; i < nn; ++i) {
        for (int j = 0; j < M; ++j) rhs[j] = res[j][i];
        const bool singular = (musq[i] == 0.0) && !end_free;
        if (singular) {
            // the kernel is the time-constant multiplier: remove the mean of
            // the residual (zero for equal-mass endpoints) and pin lambda
            Complex mean(0.0, 0.0);
            for (int j = 0; j < M; ++j) mean += rhs[j];
            mean /= static_cast<double>(M);
            for (int j = 0; j < M; ++j) rhs[j] -= mean;
            if (M == 1) {
                lam[0][i] = Complex(0.0, 0.0);
                continue;
            }
            std::vector<double> rdiag(M - 1);
            std::vector<Complex> rrhs(rhs.begin(), rhs.begin() + (M - 1));
            for (int j = 0; j < M - 1; ++j) {
                const int nfree = (j >= 1 ? 1 : 0) + (j + 1 <= M - 1 ? 1 : 0);
                rdiag[j] = musq[i] + nfree * idt2;
            }
            thomas_solve(rdiag, -idt2, rrhs);
            for (int j = 0; j < M - 1; ++j) lam[j][i] = rrhs[j];
            lam[M - 1][i] = Complex(0.0, 0.0);
        } else {
            for (int j = 0; j < M; ++j) {
                const int nfree = (j >= 1 ? 1 : 0) + ((j + 1 < M || end_free) ? 1 : 0);
                diag[j] = musq[i] + nfree * idt2;
            }
            thomas_solve(diag, -idt2, rhs);
            for (int j = 0; j < M; ++j) lam[j][i] = rhs[j];
        }
    }

    // corrections: rho_j -= (lam_{j-1} - lam_j)/dt on free layers, nu_j += grad lam_j
    for (int j = 1; j <= M; ++j) {
        if (j == M && !end_free) break;
        Spectrum corr(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const Complex prev = lam[j - 1][i];
            const Complex next = j < M ? lam[j][i] : Complex(0.0, 0.0);
            corr[i] = rho_hat[j][i] - (prev - next) / dt;
        }
        path.rho[j] = fft_inverse(grid, corr);
    }
    for (int j = 0; j < M; ++j)
        for (int a = 0; a < d; ++a) {
            Spectrum corr(nn);
            for (std::size_t i = 0; i < nn; ++i)
                corr[i] = nu_hat[j][a][i] + mult[a][i] * lam[j][i];
            path.nu[j][a] = fft_inverse(grid, corr);
        }
    return path;
}

ProxPoint prox_action(double rho_tilde, const std::array<double, 2>& nu_tilde, int d, double sigma,
                      const MobilitySpec& spec) {
    check_positive_mobility(spec);
    if (!(sigma >= 0.0)) throw std::invalid_argument("prox_action: sigma must be nonnegative");
    ProxPoint out;
    double s2 = 0.0;
    for (int a = 0; a < d; ++a) s2 += nu_tilde[a] * nu_tilde[a];

    auto momentum_for = [&](double r) {
        for (int a = 0; a < d; ++a) out.nu[a] = nu_tilde[a] / (1.0 + 2.0 * sigma / spec(r));
    };

    if (sigma == 0.0 || s2 == 0.0 || spec.is_constant_kind()) {
        out.rho = std::max(rho_tilde, 0.0);
        momentum_for(out.rho);
        return out;
    }

    auto dphi = [&](double r) {
        const double m = spec(r);
        const double den = m + 2.0 * sigma;
        return (r - rho_tilde) - sigma * s2 * spec.derivative(r) / (den * den);
    };
    auto d2phi = [&](double r) {
        const double m = spec(r);
        const double den = m + 2.0 * sigma;
        const double mp = spec.derivative(r);
        const double mpp = mobility_second_derivative(spec, r);
        return 1.0 - sigma * s2 * (mpp * den - 2.0 * mp * mp) / (den * den * den);
    };

    if (dphi(0.0) >= 0.0) {
        out.rho = 0.0;
        momentum_for(0.0);
        return out;
    }
    double lo = std::max(rho_tilde, 0.0);
    const double mlo = spec(lo), mplo = spec.derivative(lo);
    double hi = std::max(lo, 0.0) + sigma * s2 * mplo / ((mlo + 2.0 * sigma) * (mlo + 2.0 * sigma)) + 1e-300;
    if (dphi(hi) < 0.0) hi = std::max(hi * 2.0, hi + 1.0);  // FP slack; dphi(hi) >= 0 analytically

    double r = 0.5 * (lo + hi);
    int it = 0;
    for (; it < 200; ++it) {
        const double f = dphi(r);
        if (f > 0.0)
            hi = r;
        else
            lo = r;
        const double step = f / d2phi(r);
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double dr = std::abs(next - r);
        r = next;
        if (dr < 1e-12 * std::max(1.0, r) || hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    if (it >= 200) throw std::runtime_error("prox_action: Newton did not converge in 200 iterations");
    out.rho = r;
    out.iterations = it;
    momentum_for(r);
    return out;
}

DistanceResult solve_distance(const Density& gamma0, const Density& gamma1,
                              const MobilitySpec& spec, const TransportOptions& opt) {
    if (gamma0.grid != gamma1.grid) throw std::invalid_argument("solve_distance: grid mismatch");
    if (std::abs(gamma0.mass() - gamma1.mass()) > 1e-8)
        throw std::invalid_argument("solve_distance: endpoint masses differ");
    CpSetup setup;
    setup.act_weight = 1.0;
    setup.free_end = false;
    CpOutcome o = run_primal_dual(gamma0, &gamma1, spec, opt, setup);
    DistanceResult r;
    r.w2_sq = o.action;
    r.path = std::move(o.path);
    r.converged = o.converged;
    r.iterations = o.iterations;
    r.pd = o.pd;
    return r;
}

JkoStepResult jko_step(const Density& ubar, const MobilitySpec& spec, double tau, double alpha,
                       double s, const TransportOptions& opt) {
    if (!(tau > 0.0)) throw std::invalid_argument("jko_step: tau must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("jko_step: alpha must lie in (0,1)");
    const double cap = std::min(1.0, 0.5 * ubar.grid.d);
    if (!(s > 0.0 && s < cap)) throw std::invalid_argument("s must satisfy s < min(1, d/2)");

    CpSetup setup;
    setup.act_weight = c_alpha(alpha) / (2.0 * std::pow(tau, alpha));
    setup.free_end = true;
    setup.s_exponent = s;
    CpOutcome o = run_primal_dual(ubar, nullptr, spec, opt, setup);

    Field endpoint = o.path.rho[o.path.M];
    const double raw_mass = field_mass(ubar.grid, endpoint);
    double clipped = 0.0;
    for (double& x : endpoint)
        if (x < 0.0) {
            clipped -= x;
            x = 0.0;
        }
    JkoStepResult r{Density::normalized(ubar.grid, std::move(endpoint)),
                    o.action,
                    0.0,
                    o.converged,
                    o.iterations,
                    raw_mass,
                    clipped * ubar.grid.cell_volume(),
                    std::move(o.path)};
    r.objective = setup.act_weight * o.action + 0.5 * sobolev_norm_sq(ubar.grid, r.u.values, -s);
    return r;
}

}  // namespace fjko

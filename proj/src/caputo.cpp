#include "fjko/caputo.hpp"

#include <cmath>
#include <stdexcept>

namespace fjko {

namespace {

// interior coefficient w_j = (j+1)^g + (j-1)^g - 2 j^g, g = 1 - alpha
double interior_coef(int j, double g) {
    return std::pow(j + 1.0, g) + std::pow(j - 1.0, g) - 2.0 * std::pow(static_cast<double>(j), g);
}

// boundary coefficient b^{(k)}_k = (k-1)^g - k^g
double boundary_coef(int k, double g) {
    return std::pow(k - 1.0, g) - std::pow(static_cast<double>(k), g);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

}  // namespace

L1Weights l1_weights(int k, double alpha) {
    check_alpha(alpha);
    if (k < 1) throw std::invalid_argument("l1_weights: k must be >= 1");
    const double g = 1.0 - alpha;
    L1Weights w;
    w.alpha = alpha;
    w.k = k;
    w.c_alpha = c_alpha(alpha);
    w.b.resize(k + 1);
    w.b[0] = 1.0;
    for (int i = 1; i < k; ++i) w.b[i] = interior_coef(i, g);
    w.b[k] = boundary_coef(k, g);
    return w;
}

double weight_sum_identity(int k, double alpha) {
    check_alpha(alpha);
    if (k < 1) throw std::invalid_argument("weight_sum_identity: k must be >= 1");
    const double g = 1.0 - alpha;
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += -boundary_coef(i, g);
    return acc;
}

History::History(double tau_, std::vector<Density> steps_) : tau(tau_), steps(std::move(steps_)) {
    if (steps.empty()) throw std::invalid_argument("History: needs at least one state");
    if (!(tau > 0.0)) throw std::invalid_argument("History: tau must be positive");
    for (const Density& d : steps)
        if (d.grid != steps.front().grid) throw std::invalid_argument("History: grids differ");
}

Density history_combination(const History& history, const L1Weights& weights) {
    const int k = weights.k;
    if (history.count() != k)
        throw std::invalid_argument("history_combination: history length does not match weights");
    Field out(history.grid().size(), 0.0);
    for (int i = 0; i < k; ++i) {
        const double c = -weights.b[k - i];
        const Field& v = history.steps[i].values;
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += c * v[x];
    }
    return Density(history.grid(), std::move(out));
}

double scalar_history_combination(std::span<const double> u, const L1Weights& weights) {
    const int k = weights.k;
    if (static_cast<int>(u.size()) != k)
        throw std::invalid_argument("scalar_history_combination: length mismatch");
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += -weights.b[k - i] * u[i];
    return acc;
}

std::vector<double> caputo_left(std::span<const double> samples, double alpha, double tau) {
    check_alpha(alpha);
    if (samples.size() < 2) throw std::invalid_argument("caputo_left: need at least 2 samples");
    if (!(tau > 0.0)) throw std::invalid_argument("caputo_left: tau must be positive");
    const int N = static_cast<int>(samples.size()) - 1;
    const double g = 1.0 - alpha;
    const double scale = c_alpha(alpha) * std::pow(tau, -alpha);
    std::vector<double> out(N + 1, 0.0);
    for (int k = 1; k <= N; ++k) {
        double acc = samples[k];
        for (int j = 1; j < k; ++j) acc += interior_coef(j, g) * samples[k - j];
        acc += boundary_coef(k, g) * samples[0];
        out[k] = scale * acc;
    }
    return out;
}

RightCaputoSeries caputo_right(std::span<const double> samples, double alpha, double tau,
                               double horizon) {
    check_alpha(alpha);
    if (samples.size() < 2) throw std::invalid_argument("caputo_right: need at least 2 samples");
    const int N = static_cast<int>(samples.size()) - 1;
    if (std::abs(N * tau - horizon) > 1e-9 * std::max(1.0, horizon))
        throw std::invalid_argument("caputo_right: samples must span [0, T] with step tau");
    const double g = 1.0 - alpha;
    const double scale = c_alpha(alpha) * std::pow(tau, -alpha);

    RightCaputoSeries out;
    out.quadrature.assign(N + 1, 0.0);
    out.surrogate.assign(N + 1, 0.0);
    for (int k = 0; k < N; ++k) {
        const int m = N - k;
        double acc = samples[k];
        for (int j = 1; j < m; ++j) acc += interior_coef(j, g) * samples[k + j];
        acc += boundary_coef(m, g) * samples[N];
        out.surrogate[k] = scale * acc;

        // independent route: exact kernel integrals against the piecewise
        // linear reconstruction, standard right-Caputo sign
        double q = 0.0;
        for (int i = k; i < N; ++i)
            q += (samples[i + 1] - samples[i]) *
                 (std::pow(i + 1.0 - k, g) - std::pow(static_cast<double>(i - k), g));
        out.quadrature[k] = -scale * q;
    }
    return out;
}

double history_pairing_lhs(std::span<const double> u, double alpha, std::span<const double> psi_w) {
    check_alpha(alpha);
    const int N = static_cast<int>(u.size()) - 1;
    if (static_cast<int>(psi_w.size()) != N)
        throw std::invalid_argument("history_pairing_lhs: need one weight per step");
    double acc = 0.0;
    for (int k = 1; k <= N; ++k) {
        const L1Weights w = l1_weights(k, alpha);
        acc += psi_w[k - 1] * (u[k] - scalar_history_combination(u.subspan(0, k), w));
    }
    return acc;
}

double history_pairing_rhs(std::span<const double> u, double alpha, std::span<const double> psi_w) {
    check_alpha(alpha);
    const int N = static_cast<int>(u.size()) - 1;
    if (static_cast<int>(psi_w.size()) != N)
        throw std::invalid_argument("history_pairing_rhs: need one weight per step");
    const double g = 1.0 - alpha;
    double acc = 0.0;
    for (int i = 1; i <= N; ++i) {
        // adjoint weights of the L1 operator: the interior three-term formula
        // carried through the final index
        double dual = psi_w[i - 1];
        for (int k = i + 1; k <= N; ++k) dual += interior_coef(k - i, g) * psi_w[k - 1];
        acc += u[i] * dual;
    }
    double boundary = 0.0;
    for (int k = 1; k <= N; ++k) boundary += boundary_coef(k, g) * psi_w[k - 1];
    return acc + u[0] * boundary;
}

}  // namespace fjko

#pragma once

#include <span>
#include <vector>

#include "fjko/gamma.hpp"
#include "fjko/grid.hpp"

namespace fjko {

/// L1 coefficient vector b^{(k)}_0 .. b^{(k)}_k for one outer step.
/// b[0] = 1, interior entries are second differences of i^{1-alpha}, the last
/// entry couples to u^0. All of them are <= 0 except b[0].
struct L1Weights {
    double alpha = 0.5;
    int k = 1;
    std::vector<double> b;
    double c_alpha = 0.0;  // 1/Gamma(2-alpha)
};

L1Weights l1_weights(int k, double alpha);

/// sum_{i=1}^{k} (-b^{(i)}_i); equals k^{1-alpha} (telescoping).
double weight_sum_identity(int k, double alpha);

/// Ordered past states u^0 .. u^{k-1} sharing one grid, all unit mass.
struct History {
    double tau;
    std::vector<Density> steps;

    History(double tau_, std::vector<Density> steps_);
    const Grid& grid() const { return steps.front().grid; }
    int count() const { return static_cast<int>(steps.size()); }
};

/// ubar^{k-1} = sum_{i=0}^{k-1} (-b^{(k)}_{k-i}) u^i, a convex combination.
Density history_combination(const History& history, const L1Weights& weights);

/// Same combination on raw scalar sequences (used by the pairing checks).
double scalar_history_combination(std::span<const double> u, const L1Weights& weights);

/// L1 value of the left-sided Caputo derivative of a sampled function on a
/// uniform grid; entry 0 is 0 by convention.
std::vector<double> caputo_left(std::span<const double> samples, double alpha, double tau);

struct RightCaputoSeries {
    std::vector<double> quadrature;  // piecewise-linear quadrature of the right-sided integral
    std::vector<double> surrogate;   // C_alpha tau^-alpha sum_i b^{(N-k)}_{i-k} phi(t_i)
};

/// Right-sided Caputo derivative of samples ending at the horizon T, by two
/// routes that agree as tau -> 0. The last node is 0 (test functions vanish
/// there).
RightCaputoSeries caputo_right(std::span<const double> samples, double alpha, double tau,
                               double horizon);

/// Two sides of the discrete summation-by-parts identity for the L1 operator,
/// paired against arbitrary interval weights (the same quadrature must feed
/// both). They agree identically for every scalar sequence.
double history_pairing_lhs(std::span<const double> u, double alpha, std::span<const double> psi_w);
double history_pairing_rhs(std::span<const double> u, double alpha, std::span<const double> psi_w);

}  // namespace fjko

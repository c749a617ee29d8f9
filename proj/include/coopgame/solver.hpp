#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "coopgame/game.hpp"
#include "coopgame/multilinear.hpp"

namespace coopgame {

// How the solver evaluates the multilinear gradient at each step.
struct ExactGradient {};
struct SampledGradient {
    int samples_per_coordinate = 1;
    std::uint64_t seed = 0;
    // Fresh coalitions are drawn each step from per-(coordinate, step) streams.
};
struct CachedGradient {
    std::shared_ptr<const OneShotCache> cache;
};
using GradientSource = std::variant<ExactGradient, SampledGradient, CachedGradient>;

struct SolverConfig {
    double temperature = 1.0;
    MarginalVector init;  // length n; see uniform_init
    int max_steps = 50;
    double tol = 1e-12;  // threshold on ||x^k - x^{k-1}||^2 / n
    GradientSource gradient = ExactGradient{};
    bool track_elbo = false;  // exact ELBO per recorded step (small n only)
};

inline MarginalVector uniform_init(int n, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw input_error("uniform init must lie in [0,1]");
    return MarginalVector(static_cast<std::size_t>(n), v);
}

// One solver run: the iterates x^(0..k), the stepwise differences
// ||x^j - x^{j-1}||^2 / n (stepwise_diff[j-1]), optional exact ELBO traces,
// and the pre-sigmoid activations of the last update.
struct Trajectory {
    std::vector<MarginalVector> steps;
    std::vector<double> stepwise_diff;
    std::vector<double> elbo_per_step;    // empty when untracked
    std::vector<double> elbo_per_update;  // naive solver only: one entry per coordinate update
    std::vector<double> final_logits;     // z with x_final = sigmoid(z); empty when no step ran
    std::optional<int> converged_at;      // first index j with stepwise_diff[j] < tol

    const MarginalVector& final_marginals() const { return steps.back(); }

    // CSV with columns step, x_0..x_{n-1}, stepwise_diff, elbo.
    void write_csv(std::ostream& out) const;
};

// Algorithm: simultaneous fixed-point sweep x^(k) = sigmoid(grad f_mt(x^(k-1)) / T),
// up to max_steps, stopping early once the stepwise difference drops below tol.
Trajectory mfi_full_gradient(const GameOracle& game, const SolverConfig& config);

// Classic naive (coordinate-sequential) mean field: each epoch updates
// x_i <- sigmoid(grad_i f_mt(x) / T) in ascending index order against the
// freshest x; the trajectory records one vector per epoch.
Trajectory mfi_naive(const GameOracle& game, const SolverConfig& config);

// Full-gradient iteration until the stepwise difference drops below tol or
// max_steps is exhausted. Non-convergence is reported, not an error.
Trajectory run_to_convergence(const GameOracle& game, double temperature,
                              const MarginalVector& init, double tol, int max_steps,
                              const GradientSource& gradient = ExactGradient{});

double sigmoid(double z);

}  // namespace coopgame

#include "coopgame/solver.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "coopgame/ebm.hpp"

namespace coopgame {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

void check_config(const GameOracle& game, const SolverConfig& config) {
    if (!(config.temperature > 0.0)) throw input_error("solver: temperature must be positive");
    if (config.max_steps < 0) throw input_error("solver: max_steps must be nonnegative");
    if (!(config.tol >= 0.0)) throw input_error("solver: tol must be nonnegative");
    check_marginals(game, config.init);
    if (config.track_elbo) require_exact_capacity(game.num_players(), "solver ELBO tracking");
}

double partial(const GameOracle& game, const MarginalVector& x, int i,
               const GradientSource& source, std::uint64_t step) {
    if (std::holds_alternative<ExactGradient>(source)) return mt_partial_exact(game, x, i);
    if (const auto* mc = std::get_if<SampledGradient>(&source))
        return mt_partial_sampled(game, x, i, mc->samples_per_coordinate, mc->seed, step);
    return mt_partial_oneshot(*std::get_if<CachedGradient>(&source)->cache, x, i);
}

std::vector<double> full_gradient(const GameOracle& game, const MarginalVector& x,
                                  const GradientSource& source, std::uint64_t step) {
    if (std::holds_alternative<ExactGradient>(source)) return mt_gradient_exact(game, x).g;
    if (const auto* mc = std::get_if<SampledGradient>(&source))
        return mt_gradient_sampled(game, x, mc->samples_per_coordinate, mc->seed, step).g;
    return mt_gradient_oneshot(*std::get_if<CachedGradient>(&source)->cache, x).g;
}

double step_diff(const MarginalVector& a, const MarginalVector& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total / static_cast<double>(a.size());
}

}  // namespace

Trajectory mfi_full_gradient(const GameOracle& game, const SolverConfig& config) {
    check_config(game, config);
    const int n = game.num_players();
    Trajectory traj;
    traj.steps.push_back(config.init);
    if (config.track_elbo)
        traj.elbo_per_step.push_back(elbo(game, config.temperature, config.init));
    for (int k = 1; k <= config.max_steps; ++k) {
        const MarginalVector& prev = traj.steps.back();
        const std::vector<double> g =
            full_gradient(game, prev, config.gradient, static_cast<std::uint64_t>(k - 1));
        MarginalVector next(n);
        std::vector<double> logits(n);
        for (int i = 0; i < n; ++i) {
            logits[i] = g[i] / config.temperature;
            next[i] = sigmoid(logits[i]);
        }
        const double diff = step_diff(next, prev);
        traj.steps.push_back(std::move(next));
        traj.stepwise_diff.push_back(diff);
        traj.final_logits = std::move(logits);
        if (config.track_elbo)
            traj.elbo_per_step.push_back(elbo(game, config.temperature, traj.steps.back()));
        if (diff < config.tol) {
            traj.converged_at = k - 1;
            break;
        }
    }
    return traj;
}

Trajectory mfi_naive(const GameOracle& game, const SolverConfig& config) {
    check_config(game, config);
    const int n = game.num_players();
    Trajectory traj;
    traj.steps.push_back(config.init);
    if (config.track_elbo)
        traj.elbo_per_step.push_back(elbo(game, config.temperature, config.init));
    MarginalVector x = config.init;
    std::vector<double> logits(n, 0.0);
    for (int epoch = 1; epoch <= config.max_steps; ++epoch) {
        for (int i = 0; i < n; ++i) {
            const double z =
                partial(game, x, i, config.gradient, static_cast<std::uint64_t>(epoch - 1)) /
                config.temperature;
            x[i] = sigmoid(z);
            logits[i] = z;
            if (config.track_elbo)
                traj.elbo_per_update.push_back(elbo(game, config.temperature, x));
        }
        const double diff = step_diff(x, traj.steps.back());
        traj.steps.push_back(x);
        traj.stepwise_diff.push_back(diff);
        traj.final_logits = logits;
        if (config.track_elbo)
            traj.elbo_per_step.push_back(elbo(game, config.temperature, x));
        if (diff < config.tol) {
            traj.converged_at = epoch - 1;
            break;
        }
    }
    return traj;
}

Trajectory run_to_convergence(const GameOracle& game, double temperature,
                              const MarginalVector& init, double tol, int max_steps,
                              const GradientSource& gradient) {
    SolverConfig config;
    config.temperature = temperature;
    config.init = init;
    config.max_steps = max_steps;
    config.tol = tol;
    config.gradient = gradient;
    return mfi_full_gradient(game, config);
}

void Trajectory::write_csv(std::ostream& out) const {
    const std::size_t n = steps.empty() ? 0 : steps[0].size();
    out << "step";
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
    out << ",stepwise_diff,elbo\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t k = 0; k < steps.size(); ++k) {
        out << k;
        for (std::size_t i = 0; i < n; ++i) {
            out << ',';
            put(steps[k][i]);
        }
        out << ',';
        if (k > 0) put(stepwise_diff[k - 1]);
        out << ',';
        if (k < elbo_per_step.size()) put(elbo_per_step[k]);
        out << '\n';
    }
}

}  // namespace coopgame

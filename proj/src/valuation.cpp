#include "coopgame/valuation.hpp"

#include <bit>
#include <cmath>

#include "accum.hpp"
#include "coopgame/ebm.hpp"

namespace coopgame {

using detail::CompensatedSum;

std::vector<double> logit(const MarginalVector& x, LogitClamp clamp) {
    if (!(clamp.eps > 0.0 && clamp.eps < 0.5)) throw input_error("logit clamp must lie in (0, 0.5)");
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = x[i];
        if (v < clamp.eps) v = clamp.eps;
        if (v > 1.0 - clamp.eps) v = 1.0 - clamp.eps;
        z[i] = std::log(v / (1.0 - v));
    }
    return z;
}

ValuationVector banzhaf(const GameOracle& game) {
    ValuationVector out;
    out.method = "banzhaf";
    out.values = mt_gradient_exact(game, MarginalVector(game.num_players(), 0.5)).g;
    return out;
}

ValuationVector banzhaf_sampled(const GameOracle& game, int m, std::uint64_t seed) {
    ValuationVector out;
    out.method = "banzhaf";
    out.values = mt_gradient_sampled(game, MarginalVector(game.num_players(), 0.5), m, seed).g;
    out.diagnostics.samples = static_cast<std::int64_t>(m) * game.num_players();
    return out;
}

namespace {

// |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1, |S|)); exact in double for n <= 25.
std::vector<double> shapley_weights(int n) {
    std::vector<double> w(n);
    double binom = 1.0;  // C(n-1, s)
    for (int s = 0; s < n; ++s) {
        w[s] = 1.0 / (n * binom);
        binom = binom * (n - 1 - s) / (s + 1);
    }
    return w;
}

}  // namespace

ValuationVector shapley_exact(const GameOracle& game) {
    const int n = game.num_players();
    require_exact_capacity(n, "shapley_exact");
    const std::vector<double> weights = shapley_weights(n);
    ValuationVector out;
    out.method = "shapley";
    out.values.resize(n);
    const std::uint64_t limit = std::uint64_t{1} << (n - 1);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t low = (std::uint64_t{1} << i) - 1;
        CompensatedSum acc;
        for (std::uint64_t sub = 0; sub < limit; ++sub) {
            const std::uint64_t mask = ((sub & ~low) << 1) | (sub & low);
            const double delta =
                game.eval(Coalition::from_mask(mask | (std::uint64_t{1} << i))) -
                game.eval(Coalition::from_mask(mask));
            acc.add(delta * weights[static_cast<std::size_t>(std::popcount(sub))]);
        }
        out.values[i] = acc.value();
    }
    return out;
}

QuadratureRule gauss_legendre(int nodes) {
    if (nodes < 1) throw input_error("quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(nodes);
    rule.weights.resize(nodes);
    // Newton iteration on P_n over [-1, 1], then map to [0, 1].
    for (int a = 0; a < nodes; ++a) {
        double t = std::cos(M_PI * (a + 0.75) / (nodes + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            if (nodes == 1) p1 = t;
            for (int k = 2; k <= nodes; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double p = nodes == 1 ? t : p1;
            dp = nodes * (t * p - p0) / (t * t - 1.0);
            const double step = p / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule.nodes[a] = 0.5 * (1.0 - t);  // descending t gives ascending nodes
        rule.weights[a] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return rule;
}

ValuationVector shapley_line_integral(const GameOracle& game, int nodes) {
    const int n = game.num_players();
    require_exact_capacity(n, "shapley_line_integral");
    const QuadratureRule rule = gauss_legendre(nodes);
    ValuationVector out;
    out.method = "shapley-line";
    std::vector<CompensatedSum> acc(n);
    for (int a = 0; a < nodes; ++a) {
        const GradientEstimate g = mt_gradient_exact(game, MarginalVector(n, rule.nodes[a]));
        for (int i = 0; i < n; ++i) acc[i].add(rule.weights[a] * g.g[i]);
    }
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = acc[i].value();
    return out;
}

namespace {

bool is_uniform(const MarginalVector& x) {
    for (double v : x)
        if (v != x[0]) return false;
    return true;
}

std::vector<double> values_from_trajectory(const Trajectory& traj, double temperature) {
    if (!traj.final_logits.empty()) {
        std::vector<double> values(traj.final_logits.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            values[i] = temperature * traj.final_logits[i];
        return values;
    }
    // No update ran (max_steps = 0): fall back to the clamped logit of the init.
    std::vector<double> values = logit(traj.final_marginals());
    for (double& v : values) v *= temperature;
    return values;
}

std::int64_t samples_used(const GradientSource& gradient, const GameOracle& game, int steps) {
    if (const auto* mc = std::get_if<SampledGradient>(&gradient))
        return static_cast<std::int64_t>(mc->samples_per_coordinate) * game.num_players() * steps;
    if (const auto* os = std::get_if<CachedGradient>(&gradient))
        return static_cast<std::int64_t>(os->cache->samples_per_coordinate()) * game.num_players();
    return 0;
}

}  // namespace

ValuationVector kstep_variational(const GameOracle& game, double temperature,
                                  const MarginalVector& init, int k,
                                  const GradientSource& gradient) {
    if (k < 1) throw input_error("kstep_variational: K must be at least 1");
    SolverConfig config;
    config.temperature = temperature;
    config.init = init;
    config.max_steps = k;
    config.tol = 0.0;  // run exactly K steps
    config.gradient = gradient;
    const Trajectory traj = mfi_full_gradient(game, config);
    ValuationVector out;
    out.method = "kstep";
    out.values = values_from_trajectory(traj, temperature);
    out.diagnostics.temperature = temperature;
    out.diagnostics.steps = k;
    out.diagnostics.uniform_init = is_uniform(init);
    out.diagnostics.samples = samples_used(gradient, game, k);
    return out;
}

ValuationVector variational_index(const GameOracle& game, double temperature,
                                  const MarginalVector& init, double tol, int max_steps,
                                  const GradientSource& gradient) {
    const Trajectory traj = run_to_convergence(game, temperature, init, tol, max_steps, gradient);
    ValuationVector out;
    out.method = "varindex";
    out.values = values_from_trajectory(traj, temperature);
    out.diagnostics.temperature = temperature;
    out.diagnostics.steps = static_cast<int>(traj.stepwise_diff.size());
    out.diagnostics.converged_at = traj.converged_at;
    out.diagnostics.uniform_init = is_uniform(init);
    out.diagnostics.samples = samples_used(gradient, game, out.diagnostics.steps);
    if (game.num_players() <= kMaxExactPlayers)
        out.diagnostics.kl = kl_decoupling_error(game, temperature, traj.final_marginals());
    return out;
}

ValuationVector probabilistic_value(const GameOracle& game, const MarginalVector& x) {
    ValuationVector out;
    out.method = "probabilistic";
    out.values = mt_gradient_exact(game, x).g;
    return out;
}

}  // namespace coopgame

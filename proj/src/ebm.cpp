#include "coopgame/ebm.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "accum.hpp"

namespace coopgame {

using detail::CompensatedSum;

namespace {

void check_temperature(double t) {
    if (!(t > 0.0)) throw input_error("temperature must be positive");
}

double max_scaled_payoff(const GameOracle& game, double temperature) {
    const int n = game.num_players();
    const std::uint64_t limit = std::uint64_t{1} << n;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < limit; ++mask)
        best = std::max(best, game.eval(Coalition::from_mask(mask)) / temperature);
    return best;
}

}  // namespace

double log_partition(const GameOracle& game, double temperature) {
    check_temperature(temperature);
    const int n = game.num_players();
    require_exact_capacity(n, "log_partition");
    const double shift = max_scaled_payoff(game, temperature);
    const std::uint64_t limit = std::uint64_t{1} << n;
    CompensatedSum total;
    for (std::uint64_t mask = 0; mask < limit; ++mask)
        total.add(std::exp(game.eval(Coalition::from_mask(mask)) / temperature - shift));
    return shift + std::log(total.value());
}

double coalition_prob(const GameOracle& game, double temperature, const Coalition& s) {
    const double log_z = log_partition(game, temperature);
    return std::exp(game.eval(s) / temperature - log_z);
}

std::vector<double> true_marginals(const GameOracle& game, double temperature) {
    check_temperature(temperature);
    const int n = game.num_players();
    require_exact_capacity(n, "true_marginals");
    const double shift = max_scaled_payoff(game, temperature);
    const std::uint64_t limit = std::uint64_t{1} << n;
    CompensatedSum z;
    std::vector<CompensatedSum> per_player(n);
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        const double w = std::exp(game.eval(Coalition::from_mask(mask)) / temperature - shift);
        z.add(w);
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) per_player[i].add(w);
    }
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = std::clamp(per_player[i].value() / z.value(), 0.0, 1.0);
    return p;
}

double product_entropy(const MarginalVector& x) {
    CompensatedSum h;
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) throw input_error("marginal components must lie in [0,1]");
        if (v > 0.0) h.add(-v * std::log(v));
        if (v < 1.0) h.add(-(1.0 - v) * std::log(1.0 - v));
    }
    return h.value();
}

double elbo(const GameOracle& game, double temperature, const MarginalVector& x) {
    check_temperature(temperature);
    return mt_value(game, x) / temperature + product_entropy(x);
}

double kl_decoupling_error(const GameOracle& game, double temperature, const MarginalVector& x) {
    return log_partition(game, temperature) - elbo(game, temperature, x);
}

double kl_decoupling_error_direct(const GameOracle& game, double temperature,
                                  const MarginalVector& x) {
    check_marginals(game, x);
    check_temperature(temperature);
    const int n = game.num_players();
    require_exact_capacity(n, "kl_decoupling_error_direct");
    const double log_z = log_partition(game, temperature);
    const std::uint64_t limit = std::uint64_t{1} << n;
    CompensatedSum kl;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        double q = 1.0;
        for (int j = 0; j < n; ++j) q *= (mask >> j) & 1 ? x[j] : 1.0 - x[j];
        if (q == 0.0) continue;  // 0 log 0 = 0
        const double log_p = game.eval(Coalition::from_mask(mask)) / temperature - log_z;
        kl.add(q * (std::log(q) - log_p));
    }
    return kl.value();
}

EbmSummary summarize_ebm(const GameOracle& game, double temperature,
                         const std::optional<MarginalVector>& at) {
    EbmSummary summary;
    summary.log_z = log_partition(game, temperature);
    summary.true_marginals = true_marginals(game, temperature);
    if (at) {
        summary.elbo_at = elbo(game, temperature, *at);
        summary.kl_at = summary.log_z - *summary.elbo_at;
    }
    return summary;
}

}  // namespace coopgame

#include "coopgame/multilinear.hpp"

#include <cmath>

#include "accum.hpp"
#include "rng_util.hpp"

namespace coopgame {

using detail::CompensatedSum;
using detail::DD;

void check_marginals(const GameOracle& game, const MarginalVector& x) {
    if (static_cast<int>(x.size()) != game.num_players())
        throw input_error("marginal vector length does not match player count");
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw input_error("marginal components must lie in [0,1]");
}

double mt_value(const GameOracle& game, const MarginalVector& x) {
    check_marginals(game, x);
    const int n = game.num_players();
    require_exact_capacity(n, "mt_value");
    CompensatedSum total;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        double w = 1.0;
        for (int j = 0; j < n; ++j) w *= (mask >> j) & 1 ? x[j] : 1.0 - x[j];
        if (w != 0.0) total.add(game.eval(Coalition::from_mask(mask)) * w);
    }
    return total.value();
}

namespace {

void check_player(const GameOracle& game, int i) {
    if (i < 0 || i >= game.num_players()) throw input_error("player index out of range");
}

// Double-double accumulation keeps the coordinate sums invariant (to one final
// rounding) under permutations of players with bitwise-equal marginals, which
// is what makes the solver's symmetry preservation exact rather than
// approximate.
double partial_exact_unchecked(const GameOracle& game, const MarginalVector& x, int i) {
    const int n = game.num_players();
    const std::uint64_t limit = std::uint64_t{1} << (n - 1);
    const std::uint64_t low = (std::uint64_t{1} << i) - 1;
    DD acc{};
    for (std::uint64_t sub = 0; sub < limit; ++sub) {
        // Expand the (n-1)-bit pattern to a full mask with a gap at bit i.
        const std::uint64_t mask = ((sub & ~low) << 1) | (sub & low);
        DD w{1.0, 0.0};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w = detail::dd_mul(w, (mask >> j) & 1 ? x[j] : 1.0 - x[j]);
        }
        const double delta = game.eval(Coalition::from_mask(mask | (std::uint64_t{1} << i))) -
                             game.eval(Coalition::from_mask(mask));
        acc = detail::dd_add(acc, detail::dd_mul(w, delta));
    }
    return detail::round_dd(acc);
}

double partial_sampled_unchecked(const GameOracle& game, const MarginalVector& x, int i, int m,
                                 std::uint64_t seed, std::uint64_t step) {
    const int n = game.num_players();
    std::mt19937_64 eng(detail::derive_seed(seed, static_cast<std::uint64_t>(i), step));
    CompensatedSum acc;
    for (int k = 0; k < m; ++k) {
        Coalition s;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (detail::uniform01(eng) < x[j]) s.add(j);
        }
        acc.add(marginal_contribution(game, s, i));
    }
    return acc.value() / m;
}

double partial_oneshot_unchecked(const OneShotCache& cache, const MarginalVector& x, int i) {
    const int n = cache.num_players();
    const int m = cache.samples_per_coordinate();
    const auto& subsets = cache.coalitions(i);
    const auto& contribs = cache.contributions(i);
    CompensatedSum acc;
    for (int k = 0; k < m; ++k) {
        // 2^{n-1} q(S_k; x | x_i <- 0), folded into the product factor by
        // factor to keep intermediate magnitudes near 1.
        double weight = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            weight *= 2.0 * (subsets[k].contains(j) ? x[j] : 1.0 - x[j]);
        }
        acc.add(contribs[k] * weight);
    }
    return acc.value() / m;
}

void check_oneshot_args(const OneShotCache& cache, const MarginalVector& x) {
    if (static_cast<int>(x.size()) != cache.num_players())
        throw input_error("one-shot cache and marginal vector disagree on player count");
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw input_error("marginal components must lie in [0,1]");
}

}  // namespace

double mt_partial_exact(const GameOracle& game, const MarginalVector& x, int i) {
    check_marginals(game, x);
    check_player(game, i);
    require_exact_capacity(game.num_players(), "mt_partial_exact");
    return partial_exact_unchecked(game, x, i);
}

GradientEstimate mt_gradient_exact(const GameOracle& game, const MarginalVector& x) {
    check_marginals(game, x);
    const int n = game.num_players();
    require_exact_capacity(n, "mt_gradient_exact");
    GradientEstimate est;
    est.mode = GradientMode::kExact;
    est.g.resize(n);
    for (int i = 0; i < n; ++i) est.g[i] = partial_exact_unchecked(game, x, i);
    return est;
}

double mt_partial_sampled(const GameOracle& game, const MarginalVector& x, int i, int m,
                          std::uint64_t seed, std::uint64_t step) {
    check_marginals(game, x);
    check_player(game, i);
    if (m < 1) throw input_error("mt_partial_sampled: need at least one sample");
    return partial_sampled_unchecked(game, x, i, m, seed, step);
}

GradientEstimate mt_gradient_sampled(const GameOracle& game, const MarginalVector& x, int m,
                                     std::uint64_t seed, std::uint64_t step) {
    check_marginals(game, x);
    if (m < 1) throw input_error("mt_gradient_sampled: need at least one sample per coordinate");
    const int n = game.num_players();
    GradientEstimate est;
    est.mode = GradientMode::kMonteCarlo;
    est.samples_per_coordinate = m;
    est.g.resize(n);
    for (int i = 0; i < n; ++i) est.g[i] = partial_sampled_unchecked(game, x, i, m, seed, step);
    return est;
}

std::int64_t sample_count_for(double epsilon, double delta) {
    if (!(epsilon > 0.0)) throw input_error("sample_count_for: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw input_error("sample_count_for: delta must be in (0,1)");
    const double raw = 2.0 * std::log(1.0 / delta) / (epsilon * epsilon);
    auto m = static_cast<std::int64_t>(std::ceil(raw));
    if (m < 1) m = 1;
    // ceil overshoots when round-off pushes an exactly-integer bound upward;
    // back off while the guarantee still holds.
    while (m > 1 && std::exp(-(static_cast<double>(m - 1)) * epsilon * epsilon / 2.0) <= delta) --m;
    return m;
}

OneShotCache::OneShotCache(const GameOracle& game, int m, std::uint64_t seed)
    : n_(game.num_players()), m_(m) {
    if (m < 1) throw input_error("one-shot cache: need at least one sample per coordinate");
    coalitions_.resize(n_);
    contribs_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        std::mt19937_64 eng(detail::derive_seed(seed, static_cast<std::uint64_t>(i)));
        coalitions_[i].reserve(m);
        contribs_[i].reserve(m);
        for (int k = 0; k < m; ++k) {
            // Uniform over subsets of N - i: an independent fair coin per player.
            Coalition s;
            std::uint64_t bits = eng();
            for (int j = 0; j < n_; ++j) {
                if (j > 0 && j % 64 == 0) bits = eng();
                if (j == i) continue;
                if ((bits >> (j % 64)) & 1) s.add(j);
            }
            coalitions_[i].push_back(s);
            contribs_[i].push_back(marginal_contribution(game, s, i));
        }
    }
}

double mt_partial_oneshot(const OneShotCache& cache, const MarginalVector& x, int i) {
    check_oneshot_args(cache, x);
    if (i < 0 || i >= cache.num_players()) throw input_error("player index out of range");
    return partial_oneshot_unchecked(cache, x, i);
}

GradientEstimate mt_gradient_oneshot(const OneShotCache& cache, const MarginalVector& x) {
    check_oneshot_args(cache, x);
    const int n = cache.num_players();
    GradientEstimate est;
    est.mode = GradientMode::kOneShot;
    est.samples_per_coordinate = cache.samples_per_coordinate();
    est.g.resize(n);
    for (int i = 0; i < n; ++i) est.g[i] = partial_oneshot_unchecked(cache, x, i);
    return est;
}

}  // namespace coopgame

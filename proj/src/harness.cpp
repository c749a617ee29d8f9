#include "coopgame/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "coopgame/ebm.hpp"
#include "coopgame/solver.hpp"
#include "rng_util.hpp"

namespace coopgame {

RemovalCurve removal_curve(const GameOracle& game, const std::vector<double>& valuation,
                           bool descending) {
    const int n = game.num_players();
    if (static_cast<int>(valuation.size()) != n)
        throw input_error("removal_curve: valuation length must match player count");
    RemovalCurve curve;
    curve.order.resize(n);
    std::iota(curve.order.begin(), curve.order.end(), 0);
    std::stable_sort(curve.order.begin(), curve.order.end(), [&](int a, int b) {
        return descending ? valuation[a] > valuation[b] : valuation[a] < valuation[b];
    });
    Coalition survivors = Coalition::full(n);
    curve.payoffs.reserve(n + 1);
    curve.payoffs.push_back(game.eval(survivors));
    for (int removed : curve.order) {
        survivors.remove(removed);
        curve.payoffs.push_back(game.eval(survivors));
    }
    return curve;
}

namespace {

// Fractional ranks, averaging over ties.
std::vector<double> ranks_of(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos + 1;
        while (end < n && v[idx[end]] == v[idx[pos]]) ++end;
        const double avg = 0.5 * (static_cast<double>(pos) + static_cast<double>(end - 1)) + 1.0;
        for (std::size_t k = pos; k < end; ++k) ranks[idx[k]] = avg;
        pos = end;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b, bool* degenerate) {
    if (a.size() != b.size() || a.size() < 2)
        throw input_error("spearman: vectors must have equal length >= 2");
    const std::vector<double> ra = ranks_of(a);
    const std::vector<double> rb = ranks_of(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    return cov / std::sqrt(var_a * var_b);
}

FitReport marginal_fit(const GameOracle& game, double temperature, const MarginalVector& x) {
    check_marginals(game, x);
    FitReport report;
    report.truth = true_marginals(game, temperature);
    report.predicted = x;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - report.truth[i];
        sum_sq += d * d;
    }
    report.mse = sum_sq / static_cast<double>(x.size());
    report.spearman_rho = spearman(report.predicted, report.truth, &report.spearman_degenerate);
    return report;
}

namespace {

// Uniform over the dyadic grid 2^-20 * {-2^20, ..., 2^20}: dense enough to be
// uniform[-1,1] for all practical purposes, while sums and differences of a
// few table entries stay exactly representable.
double dyadic_uniform(std::mt19937_64& eng) {
    const auto grid = static_cast<std::int64_t>(eng() % (2u * (1u << 20) + 1u)) - (1 << 20);
    return static_cast<double>(grid) * 0x1.0p-20;
}

std::vector<double> dyadic_table(int n, std::mt19937_64& eng) {
    std::vector<double> table(std::size_t{1} << n);
    for (double& v : table) v = dyadic_uniform(eng);
    return table;
}

}  // namespace

std::shared_ptr<TabulatedGame> random_tabulated_game(int n, std::uint64_t seed) {
    std::mt19937_64 eng(detail::splitmix64(seed));
    std::vector<double> table = dyadic_table(n, eng);
    table[0] = 0.0;
    return std::make_shared<TabulatedGame>(n, std::move(table));
}

std::vector<AxiomCase> gen_axiom_suite(std::uint64_t seed, int n, int count) {
    if (n < 2 || n > 12) throw input_error("gen_axiom_suite: n must be in [2, 12]");
    if (count < 1) throw input_error("gen_axiom_suite: count must be positive");
    std::vector<AxiomCase> cases;
    cases.reserve(4 * static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        std::mt19937_64 eng(detail::derive_seed(seed, static_cast<std::uint64_t>(c)));
        const auto pick = [&](int exclude = -1) {
            int p;
            do
                p = static_cast<int>(eng() % n);
            while (p == exclude);
            return p;
        };

        {  // Null player: force F(S+i) = F(S) for every S not containing i.
            std::vector<double> table = dyadic_table(n, eng);
            const int i = pick();
            const std::uint64_t bit = std::uint64_t{1} << i;
            for (std::uint64_t mask = 0; mask < table.size(); ++mask)
                if (mask & bit) table[mask] = table[mask & ~bit];
            AxiomCase cs;
            cs.game_a = cs.game_b = std::make_shared<TabulatedGame>(n, std::move(table));
            cs.relation = AxiomRelation::kNullPlayer;
            cs.player_i = i;
            cases.push_back(std::move(cs));
        }
        {  // Symmetric pair: copy F(A+i) onto F(A+j) for every A avoiding both.
            std::vector<double> table = dyadic_table(n, eng);
            const int i = pick();
            const int j = pick(i);
            const std::uint64_t bi = std::uint64_t{1} << i;
            const std::uint64_t bj = std::uint64_t{1} << j;
            for (std::uint64_t mask = 0; mask < table.size(); ++mask)
                if (!(mask & bi) && !(mask & bj)) table[mask | bj] = table[mask | bi];
            AxiomCase cs;
            cs.game_a = cs.game_b = std::make_shared<TabulatedGame>(n, std::move(table));
            cs.relation = AxiomRelation::kSymmetricPair;
            cs.player_i = i;
            cs.player_j = j;
            cases.push_back(std::move(cs));
        }
        {  // Marginalism: G = F + dyadic constant, exact in floating point.
            std::vector<double> table = dyadic_table(n, eng);
            const double shift = dyadic_uniform(eng);
            std::vector<double> shifted = table;
            for (double& v : shifted) v += shift;
            AxiomCase cs;
            cs.game_a = std::make_shared<TabulatedGame>(n, std::move(table));
            cs.game_b = std::make_shared<TabulatedGame>(n, std::move(shifted));
            cs.relation = AxiomRelation::kMarginalism;
            cases.push_back(std::move(cs));
        }
        {  // Additivity pair: two independent tables; callers form F+G.
            AxiomCase cs;
            cs.game_a = std::make_shared<TabulatedGame>(n, dyadic_table(n, eng));
            cs.game_b = std::make_shared<TabulatedGame>(n, dyadic_table(n, eng));
            cs.relation = AxiomRelation::kAdditivity;
            cases.push_back(std::move(cs));
        }
    }
    return cases;
}

std::shared_ptr<FlidGame> random_flid_game(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 0) throw input_error("random_flid_game: need n >= 1, d >= 0");
    std::mt19937_64 eng(detail::splitmix64(seed ^ 0xf11dULL));
    std::vector<std::vector<double>> w(n, std::vector<double>(d));
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int k = 0; k < d; ++k) {
            w[i][k] = detail::uniform01(eng);
            row_sum += w[i][k];
        }
        u[i] = detail::uniform(eng, 0.0, 1.5 * row_sum);
    }
    return make_flid(std::move(w), std::move(u));
}

std::vector<BenchRow> flid_benchmark(std::uint64_t master_seed, const std::vector<int>& n_list,
                                     const std::vector<int>& d_list, int seeds_per_config,
                                     double temperature) {
    if (seeds_per_config < 1) throw input_error("flid_benchmark: need at least one seed");
    std::vector<BenchRow> rows;
    for (int n : n_list) {
        require_exact_capacity(n, "flid_benchmark");
        for (int d : d_list) {
            for (int s = 0; s < seeds_per_config; ++s) {
                const std::uint64_t seed = detail::derive_seed(
                    master_seed, static_cast<std::uint64_t>(n) << 16 | static_cast<std::uint64_t>(d),
                    static_cast<std::uint64_t>(s));
                const auto game = random_flid_game(n, d, seed);

                auto score = [&](const std::string& method, const MarginalVector& predicted,
                                 std::optional<int> converged) {
                    const FitReport fit = marginal_fit(*game, temperature, predicted);
                    BenchRow row;
                    row.n = n;
                    row.d = d;
                    row.seed = seed;
                    row.method = method;
                    row.mse = fit.mse;
                    row.spearman = fit.spearman_rho;
                    row.kl = kl_decoupling_error(*game, temperature, predicted);
                    row.converged_at = converged;
                    rows.push_back(std::move(row));
                };

                auto squash = [&](const std::vector<double>& phi) {
                    MarginalVector x(phi.size());
                    for (std::size_t i = 0; i < phi.size(); ++i)
                        x[i] = sigmoid(phi[i] / temperature);
                    return x;
                };

                score("shapley", squash(shapley_exact(*game).values), std::nullopt);
                score("banzhaf", squash(banzhaf(*game).values), std::nullopt);

                const Trajectory traj = run_to_convergence(*game, temperature,
                                                           MarginalVector(n, 0.5), 1e-12, 50);
                score("varindex", traj.final_marginals(), traj.converged_at);
            }
        }
    }
    return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "n,D,seed,method,mse,spearman,kl,converged_at\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const BenchRow& row : rows) {
        out << row.n << ',' << row.d << ',' << row.seed << ',' << row.method << ',';
        put(row.mse);
        out << ',';
        put(row.spearman);
        out << ',';
        put(row.kl);
        out << ',';
        if (row.converged_at) out << *row.converged_at;
        out << '\n';
    }
}

}  // namespace coopgame

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coopgame/game.hpp"
#include "coopgame/multilinear.hpp"
#include "coopgame/valuation.hpp"

namespace coopgame {

// Player-removal experiment: remove players one at a time in valuation order
// and track the payoff of the surviving coalition.
struct RemovalCurve {
    std::vector<int> order;       // players in removal order
    std::vector<double> payoffs;  // payoffs[k] = F(survivors after removing k players)
};

// Stable sort by value (descending by default; ties broken by ascending player
// index), then successive evaluations on shrinking coalitions.
RemovalCurve removal_curve(const GameOracle& game, const std::vector<double>& valuation,
                           bool descending = true);

// Spearman rank correlation with average ranks for ties. A constant input has
// no defined rank correlation; the result is 0 with degenerate set (no NaNs).
double spearman(const std::vector<double>& a, const std::vector<double>& b,
                bool* degenerate = nullptr);

struct FitReport {
    double mse = 0.0;
    double spearman_rho = 0.0;
    bool spearman_degenerate = false;
    std::vector<double> predicted;
    std::vector<double> truth;
};

// Fit of a marginal vector against the exact EBM marginals at temperature T.
// Callers comparing Shapley/Banzhaf pass sigmoid(phi/T) as x.
FitReport marginal_fit(const GameOracle& game, double temperature, const MarginalVector& x);

// Randomized game pairs for the axiom suites.
enum class AxiomRelation { kNullPlayer, kSymmetricPair, kMarginalism, kAdditivity };

struct AxiomCase {
    std::shared_ptr<const GameOracle> game_a;
    std::shared_ptr<const GameOracle> game_b;  // == game_a for null-player / symmetric cases
    AxiomRelation relation = AxiomRelation::kNullPlayer;
    int player_i = -1;  // the forced null player, or one of the symmetric pair
    int player_j = -1;  // the other symmetric player
};

// Emits `count` cases of each relation on n players. Payoff tables are drawn
// uniformly from the dyadic grid 2^-20 * {-2^20..2^20} in [-1,1] so that
// constant shifts preserve every marginal contribution bitwise.
std::vector<AxiomCase> gen_axiom_suite(std::uint64_t seed, int n, int count);

// Random tabulated game with dyadic uniform[-1,1] payoffs and F(empty)=0.
std::shared_ptr<TabulatedGame> random_tabulated_game(int n, std::uint64_t seed);

// Random FLID game: W ~ uniform[0,1]^{n x D}, u_i ~ uniform[0, 1.5 sum_d W_id]
// so the reduced utilities take both signs.
std::shared_ptr<FlidGame> random_flid_game(int n, int d, std::uint64_t seed);

// One row of the FLID benchmark: a method's predicted marginals scored against
// the exact EBM marginals, plus its decoupling error.
struct BenchRow {
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;
    std::string method;
    double mse = 0.0;
    double spearman = 0.0;
    double kl = 0.0;
    std::optional<int> converged_at;
};

// For each (n, D, seed): generate a FLID game, compute sigmoid(shapley/T),
// sigmoid(banzhaf/T) and the converged mean-field marginals, and score each
// against the true marginals. Rows come out sorted by (n, D, seed, method).
std::vector<BenchRow> flid_benchmark(std::uint64_t master_seed, const std::vector<int>& n_list,
                                     const std::vector<int>& d_list, int seeds_per_config,
                                     double temperature);

// CSV with columns n,D,seed,method,mse,spearman,kl,converged_at.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace coopgame

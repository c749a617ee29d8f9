#pragma once

#include <optional>
#include <vector>

#include "coopgame/game.hpp"
#include "coopgame/multilinear.hpp"

namespace coopgame {

// Exact quantities of the maximum-entropy coalition distribution
// p(S) = exp(F(S)/T) / Z at temperature T > 0. All routines enumerate the
// 2^n coalitions and refuse n > 25.

// log Z = log sum_S exp(F(S)/T), max-shifted for overflow safety.
double log_partition(const GameOracle& game, double temperature);

// p(S) = exp(F(S)/T - log Z).
double coalition_prob(const GameOracle& game, double temperature, const Coalition& s);

// p_i = sum_{S containing i} p(S).
std::vector<double> true_marginals(const GameOracle& game, double temperature);

// Entropy of the product distribution q(S; x): sum of Bernoulli entropies,
// with 0 log 0 taken as 0.
double product_entropy(const MarginalVector& x);

// ELBO(x) = f_mt(x)/T + H(q(.; x)); lower-bounds log Z.
double elbo(const GameOracle& game, double temperature, const MarginalVector& x);

// KL(q(.; x) || p) computed as log Z - ELBO(x). Nonnegative up to -1e-12 of
// round-off; this is the production decoupling-error path.
double kl_decoupling_error(const GameOracle& game, double temperature, const MarginalVector& x);

// The same KL as the direct 2^n-term sum sum_S q log(q/p); independent
// cross-check route for the difference form above.
double kl_decoupling_error_direct(const GameOracle& game, double temperature,
                                  const MarginalVector& x);

struct EbmSummary {
    double log_z = 0.0;
    std::vector<double> true_marginals;
    std::optional<double> elbo_at;
    std::optional<double> kl_at;
};

// One-stop summary for a (game, temperature) pair, optionally evaluating the
// ELBO and decoupling error at a marginal vector.
EbmSummary summarize_ebm(const GameOracle& game, double temperature,
                         const std::optional<MarginalVector>& at = std::nullopt);

}  // namespace coopgame

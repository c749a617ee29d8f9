#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopgame/game.hpp"
#include "coopgame/multilinear.hpp"
#include "coopgame/solver.hpp"

namespace coopgame {

struct ValuationDiagnostics {
    std::optional<int> converged_at;
    std::optional<double> kl;  // decoupling error at the final marginals (small n only)
    double temperature = 1.0;
    int steps = 0;
    std::int64_t samples = 0;
    bool uniform_init = true;  // the axioms of Theorem-style results assume this
};

// An importance vector over players together with the method that produced it.
// method is one of "banzhaf", "shapley", "shapley-line", "kstep", "varindex",
// "probabilistic".
struct ValuationVector {
    std::vector<double> values;
    std::string method;
    ValuationDiagnostics diagnostics;
};

// Guard for the logit's singularity at {0,1}: marginals are clamped into
// [eps, 1-eps] before inverting the sigmoid.
struct LogitClamp {
    double eps = 1e-12;
};

// Componentwise log(x/(1-x)) after clamping.
std::vector<double> logit(const MarginalVector& x, LogitClamp clamp = {});

// Banzhaf value: uniformly weighted marginal contributions,
// phi_i = 2^{-(n-1)} sum_{S subset of N-i} [F(S+i) - F(S)]; equals the
// multilinear gradient at 0.5*1.
ValuationVector banzhaf(const GameOracle& game);
ValuationVector banzhaf_sampled(const GameOracle& game, int m, std::uint64_t seed);

// Shapley value via the subset-weight formula
// phi_i = sum_{S subset of N-i} [F(S+i) - F(S)] |S|!(n-|S|-1)!/n!.
ValuationVector shapley_exact(const GameOracle& game);

// Shapley value as the line integral of the multilinear gradient along the
// cube diagonal, by Gauss-Legendre quadrature. The integrand is a polynomial
// of degree <= n-1, so nodes >= ceil(n/2) makes the rule exact to round-off.
ValuationVector shapley_line_integral(const GameOracle& game, int nodes);

// K-step variational value: T * logit of the marginals after K full-gradient
// sigmoid steps from init. The value is read off the pre-sigmoid activation of
// the last update, which equals T*logit(x_K) without the lossy sigmoid round
// trip.
ValuationVector kstep_variational(const GameOracle& game, double temperature,
                                  const MarginalVector& init, int k,
                                  const GradientSource& gradient = ExactGradient{});

// Variational index (as approximated by the full-gradient fixed point):
// T * logit of the converged marginals, with convergence and decoupling-error
// diagnostics.
ValuationVector variational_index(const GameOracle& game, double temperature,
                                  const MarginalVector& init, double tol, int max_steps,
                                  const GradientSource& gradient = ExactGradient{});

// The 1-step value at an arbitrary x seen as a probabilistic value with
// per-player coalition weights q(S; x | x_i <- 0); identical to the exact
// multilinear gradient.
ValuationVector probabilistic_value(const GameOracle& game, const MarginalVector& x);

// Gauss-Legendre nodes and weights on [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(int nodes);

}  // namespace coopgame

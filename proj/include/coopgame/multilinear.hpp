#pragma once

#include <cstdint>
#include <vector>

#include "coopgame/game.hpp"

namespace coopgame {

// A point x in [0,1]^n parameterizing the product distribution q(S; x) in
// which player i participates independently with probability x_i.
using MarginalVector = std::vector<double>;

// Throws input_error unless x has length n with every component in [0,1].
void check_marginals(const GameOracle& game, const MarginalVector& x);

enum class GradientMode { kExact, kMonteCarlo, kOneShot };

struct GradientEstimate {
    std::vector<double> g;
    GradientMode mode = GradientMode::kExact;
    int samples_per_coordinate = 0;  // 0 in exact mode
};

// Multilinear extension f_mt(x) = sum_S F(S) prod_{i in S} x_i prod_{j not in S} (1-x_j).
// Exact enumeration; refuses n > 25.
double mt_value(const GameOracle& game, const MarginalVector& x);

// Exact gradient: g_i = sum_{S subset of N-i} [F(S+i)-F(S)] * q(S; x with x_i dropped).
// Accumulated in double-double so the result is invariant, to one rounding,
// under permutations of equal-valued players.
GradientEstimate mt_gradient_exact(const GameOracle& game, const MarginalVector& x);

// Monte-Carlo gradient: per coordinate i, m coalitions S_k drawn from
// q(S; x | x_i <- 0) by independent Bernoulli(x_j) draws, averaging marginal
// contributions. Deterministic given (seed, step): coordinate i at step k uses
// an independent stream derived from the master seed.
GradientEstimate mt_gradient_sampled(const GameOracle& game, const MarginalVector& x, int m,
                                     std::uint64_t seed, std::uint64_t step = 0);

// Single coordinates of the three gradient routes; the solvers' sequential
// sweeps need the freshest-x partial without recomputing the whole vector.
double mt_partial_exact(const GameOracle& game, const MarginalVector& x, int i);
double mt_partial_sampled(const GameOracle& game, const MarginalVector& x, int i, int m,
                          std::uint64_t seed, std::uint64_t step = 0);

// Smallest m with exp(-m eps^2 / 2) <= delta, i.e. ceil(2 ln(1/delta) / eps^2).
// The guarantee is on the scale eps * max_S |F(S+i) - F(S)|.
std::int64_t sample_count_for(double epsilon, double delta);

// Frozen per-player uniform coalition samples with their marginal
// contributions, built once and reused across solver iterations. At most
// 2*n*m inner-oracle evaluations.
class OneShotCache {
  public:
    OneShotCache(const GameOracle& game, int m, std::uint64_t seed);

    int num_players() const { return n_; }
    int samples_per_coordinate() const { return m_; }
    const std::vector<Coalition>& coalitions(int i) const { return coalitions_[i]; }
    const std::vector<double>& contributions(int i) const { return contribs_[i]; }

  private:
    int n_;
    int m_;
    std::vector<std::vector<Coalition>> coalitions_;
    std::vector<std::vector<double>> contribs_;
};

// Importance-sampling gradient from a one-shot cache:
// g_i = (2^{n-1}/m) sum_k [F(S_k+i)-F(S_k)] q(S_k; x | x_i <- 0),
// computed as the mean of contributions weighted by prod_{j != i} 2*q_j(S_k).
GradientEstimate mt_gradient_oneshot(const OneShotCache& cache, const MarginalVector& x);

double mt_partial_oneshot(const OneShotCache& cache, const MarginalVector& x, int i);

}  // namespace coopgame

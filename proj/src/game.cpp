#include "coopgame/game.hpp"

#include <bit>
#include <cmath>

namespace coopgame {

Coalition Coalition::full(int n) {
    Coalition c;
    for (int i = 0; i < n; ++i) c.add(i);
    return c;
}

int Coalition::size() const {
    return std::popcount(words_[0]) + std::popcount(words_[1]);
}

bool Coalition::exceeds(int n) const {
    if (n >= kMaxPlayers) return false;
    if (n >= 64) return (words_[1] >> (n - 64)) != 0;
    return words_[1] != 0 || (words_[0] >> n) != 0;
}

std::uint64_t Coalition::mask() const {
    if (words_[1] != 0) throw input_error("coalition too wide for a 64-bit mask");
    return words_[0];
}

std::uint64_t Coalition::hash() const {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(words_[0]) ^ (mix(words_[1]) * 0x9e3779b97f4a7c15ULL);
}

double marginal_contribution(const GameOracle& game, const Coalition& s, int i) {
    if (i < 0 || i >= game.num_players()) throw input_error("player index out of range");
    if (s.contains(i)) throw input_error("marginal_contribution: player already in coalition");
    return game.eval(s.with(i)) - game.eval(s);
}

TabulatedGame::TabulatedGame(int n, std::vector<double> table)
    : GameOracle(n), table_(std::move(table)) {
    require_exact_capacity(n, "TabulatedGame");
    if (table_.size() != (std::size_t{1} << n))
        throw input_error("tabulated game needs exactly 2^n values");
}

FlidGame::FlidGame(std::vector<std::vector<double>> w, std::vector<double> u)
    : GameOracle(static_cast<int>(w.size())), w_(std::move(w)), u_(std::move(u)) {
    const int n = num_players();
    if (static_cast<int>(u_.size()) != n) throw input_error("FLID: |u| must equal the row count of W");
    d_ = w_.empty() ? 0 : static_cast<int>(w_[0].size());
    uprime_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(w_[i].size()) != d_) throw input_error("FLID: ragged weight matrix");
        double row_sum = 0.0;
        for (double v : w_[i]) {
            if (v < 0.0) throw input_error("FLID: weights must be nonnegative");
            row_sum += v;
        }
        uprime_[i] = u_[i] - row_sum;
    }
}

double FlidGame::value_of(const Coalition& s) const {
    const int n = num_players();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        if (s.contains(i)) total += uprime_[i];
    for (int d = 0; d < d_; ++d) {
        double best = 0.0;  // max over the empty set is 0, so F(empty) = 0
        for (int i = 0; i < n; ++i)
            if (s.contains(i) && w_[i][d] > best) best = w_[i][d];
        total += best;
    }
    return total;
}

VotingGame::VotingGame(std::vector<double> weights, double quota)
    : GameOracle(static_cast<int>(weights.size())), weights_(std::move(weights)), quota_(quota) {
    for (double w : weights_)
        if (w < 0.0) throw input_error("voting game: weights must be nonnegative");
}

double VotingGame::value_of(const Coalition& s) const {
    double total = 0.0;
    for (int i = 0; i < num_players(); ++i)
        if (s.contains(i)) total += weights_[i];
    return total >= quota_ ? 1.0 : 0.0;
}

AdditiveGame::AdditiveGame(std::vector<double> c)
    : GameOracle(static_cast<int>(c.size())), c_(std::move(c)) {}

double AdditiveGame::value_of(const Coalition& s) const {
    double total = 0.0;
    for (int i = 0; i < num_players(); ++i)
        if (s.contains(i)) total += c_[i];
    return total;
}

MemoizedGame::MemoizedGame(std::shared_ptr<const GameOracle> inner)
    : GameOracle(inner->num_players()), inner_(std::move(inner)) {}

double MemoizedGame::value_of(const Coalition& s) const {
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(s);
        if (it != cache_.end()) return it->second;
    }
    const double v = inner_->eval(s);
    inner_calls_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard lock(mu_);
    cache_.emplace(s, v);
    return v;
}

}  // namespace coopgame

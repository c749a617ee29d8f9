#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "coopgame/errors.hpp"

namespace coopgame {

// A coalition of players, stored as a bitset. Bit i set <=> player i is a member.
// Player indices are 0-based throughout; two 64-bit words cover every game this
// library handles (exact paths stop at 25 players, sampling paths at 128).
class Coalition {
  public:
    static constexpr int kMaxPlayers = 128;

    Coalition() = default;

    static Coalition from_mask(std::uint64_t mask) {
        Coalition c;
        c.words_[0] = mask;
        return c;
    }

    // The grand coalition {0, ..., n-1}.
    static Coalition full(int n);

    bool contains(int i) const { return (words_[word(i)] >> bit(i)) & 1u; }

    void add(int i) { words_[word(i)] |= std::uint64_t{1} << bit(i); }
    void remove(int i) { words_[word(i)] &= ~(std::uint64_t{1} << bit(i)); }

    Coalition with(int i) const {
        Coalition c = *this;
        c.add(i);
        return c;
    }
    Coalition without(int i) const {
        Coalition c = *this;
        c.remove(i);
        return c;
    }

    int size() const;

    // True when some member index is >= n (i.e. the mask is out of range for an
    // n-player game).
    bool exceeds(int n) const;

    // Low 64 bits as an integer index; only valid when no higher bit is set.
    std::uint64_t mask() const;

    std::uint64_t hash() const;

    bool operator==(const Coalition&) const = default;

  private:
    static int word(int i) { return i >> 6; }
    static int bit(int i) { return i & 63; }
    std::array<std::uint64_t, 2> words_{0, 0};
};

struct CoalitionHash {
    std::size_t operator()(const Coalition& c) const { return static_cast<std::size_t>(c.hash()); }
};

// A cooperative game: a player count and a pure, total value function over the
// 2^n coalitions. eval() validates the coalition and must be safe to call from
// many threads at once.
class GameOracle {
  public:
    virtual ~GameOracle() = default;

    int num_players() const { return n_; }

    double eval(const Coalition& s) const {
        if (s.exceeds(n_)) throw input_error("coalition bitmask out of range for game");
        return value_of(s);
    }

  protected:
    explicit GameOracle(int n) : n_(n) {
        if (n < 1) throw input_error("game needs at least one player");
        if (n > Coalition::kMaxPlayers) throw input_error("player count exceeds coalition width");
    }

    virtual double value_of(const Coalition& s) const = 0;

  private:
    int n_;
};

// F(S+i) - F(S). Requires i not already in S.
double marginal_contribution(const GameOracle& game, const Coalition& s, int i);

// Dense table of all 2^n payoffs, indexed by bitmask.
class TabulatedGame final : public GameOracle {
  public:
    TabulatedGame(int n, std::vector<double> table);

    const std::vector<double>& table() const { return table_; }

  private:
    double value_of(const Coalition& s) const override { return table_[s.mask()]; }
    std::vector<double> table_;
};

// FLID diversity game: F(S) = sum_{i in S} u'_i + sum_d max_{i in S} W_{i,d},
// with u'_i = u_i - sum_d W_{i,d} and the max over the empty set taken as 0.
class FlidGame final : public GameOracle {
  public:
    FlidGame(std::vector<std::vector<double>> w, std::vector<double> u);

    int latent_dims() const { return d_; }
    const std::vector<std::vector<double>>& weights() const { return w_; }
    const std::vector<double>& utilities() const { return u_; }
    const std::vector<double>& reduced_utilities() const { return uprime_; }

  private:
    double value_of(const Coalition& s) const override;
    std::vector<std::vector<double>> w_;
    std::vector<double> u_;
    std::vector<double> uprime_;
    int d_;
};

inline std::shared_ptr<FlidGame> make_flid(std::vector<std::vector<double>> w, std::vector<double> u) {
    return std::make_shared<FlidGame>(std::move(w), std::move(u));
}

// Weighted voting game: F(S) = 1 iff the members' total weight reaches the quota.
class VotingGame final : public GameOracle {
  public:
    VotingGame(std::vector<double> weights, double quota);

    const std::vector<double>& weights() const { return weights_; }
    double quota() const { return quota_; }

  private:
    double value_of(const Coalition& s) const override;
    std::vector<double> weights_;
    double quota_;
};

// Modular game F(S) = sum_{i in S} c_i. Its EBM factorizes exactly, which makes
// it a handy analytic fixture.
class AdditiveGame final : public GameOracle {
  public:
    explicit AdditiveGame(std::vector<double> c);

    const std::vector<double>& coefficients() const { return c_; }

  private:
    double value_of(const Coalition& s) const override;
    std::vector<double> c_;
};

// Thread-safe memoizing wrapper: each distinct coalition hits the inner oracle
// at most once per cached entry; concurrent duplicate evaluation may happen but
// the stored value is consistent (the value function is pure).
class MemoizedGame final : public GameOracle {
  public:
    explicit MemoizedGame(std::shared_ptr<const GameOracle> inner);

    // Number of evaluations forwarded to the inner oracle.
    std::uint64_t inner_evaluations() const { return inner_calls_.load(); }

  private:
    double value_of(const Coalition& s) const override;
    std::shared_ptr<const GameOracle> inner_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Coalition, double, CoalitionHash> cache_;
    mutable std::atomic<std::uint64_t> inner_calls_{0};
};

inline std::shared_ptr<MemoizedGame> memoize(std::shared_ptr<const GameOracle> inner) {
    return std::make_shared<MemoizedGame>(std::move(inner));
}

}  // namespace coopgame

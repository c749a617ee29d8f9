#pragma once

#include <cmath>

// Error-free transforms and compensated accumulation used by the exact
// enumeration paths. The gradient sums must be reproducible and invariant (to
// within one final rounding) under reordering of equal-valued terms, so they
// run in double-double; plain compensated (Neumaier) sums are enough elsewhere.

namespace coopgame::detail {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bp = s - a;
    const double err = (a - (s - bp)) + (b - bp);
    return {s, err};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    DD r = two_sum(s.hi, lo);
    return r;
}

inline DD dd_mul(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo = std::fma(a.lo, b, p.lo);
    DD r = two_sum(p.hi, p.lo);
    return r;
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    DD r = two_sum(p.hi, p.lo);
    return r;
}

inline double round_dd(DD a) { return a.hi + a.lo; }

// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace coopgame::detail

#pragma once

#include <algorithm>
#include <cmath>

#include "params.hpp"

namespace asep {

// P(Poisson(lambda) >= k), summed upward from k so tiny tails keep their digits.
inline double poisson_tail(double lambda, long k)
{
    if (k <= 0)
        return 1.0;
    if (lambda <= 0.0)
        return 0.0;
    double term = std::exp(-lambda + k * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0));
    double sum = 0.0;
    for (long j = k;; ++j) {
        sum += term;
        term *= lambda / static_cast<double>(j + 1);
        if (static_cast<double>(j + 1) > lambda && term < 1e-18 * sum)
            break;
        if (term == 0.0)
            break;
    }
    return sum + term;
}

// Smallest K with N * P(Poisson(t) >= K) < tail: every particle stays within K sites of its start.
inline long tail_halfwidth(int N, double t, double tail)
{
    long K = 0;
    while (N * poisson_tail(t, K) >= tail)
        ++K;
    return K;
}

// Smallest K with 2 P(Poisson(r t) > K) < tail, r = max(p, q). The site left of the second-class
// particle is empty (own jump, rate q) or first class (swap, rate p), and symmetrically on the
// right, so its moves in each direction are dominated by a Poisson count of rate r.
inline long displacement_halfwidth(const ModelParams& m, double t, double tail)
{
    const double rate = std::max(m.p(), m.q()) * t;
    long K = 0;
    while (2.0 * poisson_tail(rate, K + 1) >= tail)
        ++K;
    return K;
}

struct Window {
    long lo;
    long hi;

    long size() const noexcept { return hi - lo + 1; }
    bool contains(long x) const noexcept { return x >= lo && x <= hi; }
};

inline Window particle_window(const InitialConfig& Y, double t, double tail)
{
    const long K = tail_halfwidth(Y.size(), t, tail);
    return {Y.leftmost() - K, Y.rightmost() + K};
}

inline Window second_class_window(const ModelParams& m, const InitialConfig& Y, double t, double tail)
{
    const long K = displacement_halfwidth(m, t, tail);
    return {Y.rightmost() - K, Y.rightmost() + K};
}

} // namespace asep

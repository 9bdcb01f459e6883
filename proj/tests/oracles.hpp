#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <vector>

namespace oracle_ref {

// e^{-t} sum over j - k = d of p^j q^k t^{j+k} / (j! k!): a walker with right rate p, left rate q.
inline double biased_walk(double p, double t, long d)
{
    const double q = 1.0 - p;
    const long ad = std::labs(d);
    const double s = std::sqrt(p * q) * t;
    double sum = 0.0;
    for (long k = 0; k < 200; ++k) {
        const double lg = (2.0 * k + ad) * std::log(s) - std::lgamma(k + 1.0) - std::lgamma(k + ad + 1.0);
        if (s == 0.0)
            break;
        sum += std::exp(lg);
    }
    if (t == 0.0)
        return d == 0 ? 1.0 : 0.0;
    return std::exp(-t) * std::pow(p / q, 0.5 * static_cast<double>(d)) * sum;
}

// e^{-t} I_d(t)
inline double symmetric_walk(double t, long d)
{
    const long ad = std::labs(d);
    if (t == 0.0)
        return d == 0 ? 1.0 : 0.0;
    double sum = 0.0;
    for (long k = 0; k < 200; ++k)
        sum += std::exp((2.0 * k + ad) * std::log(t / 2.0) - std::lgamma(k + 1.0) - std::lgamma(k + ad + 1.0));
    return std::exp(-t) * sum;
}

inline std::vector<std::complex<double>> random_circle(std::mt19937_64& rng, int n, double radius)
{
    std::uniform_real_distribution<double> a(0.0, 2.0 * 3.14159265358979323846);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < n; ++i)
        out.push_back(std::polar(radius, a(rng)));
    return out;
}

} // namespace oracle_ref

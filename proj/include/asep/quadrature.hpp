#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "params.hpp"

namespace asep {

struct Contour {
    double radius = 0.25;
    int nodes = 64;

    // Radius small enough that every p + q xi xi' - xi stays away from zero on the polydisc.
    bool admissible(const ModelParams& m) const
    {
        return radius > 0.0 && radius < 1.0 && radius * (1.0 + m.q() * radius) < m.p();
    }

    void validate() const
    {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw contour_error("contour radius must be positive");
        if (nodes < 2 || nodes % 2 != 0)
            throw contour_error("contour node count must be even and at least 2");
    }

    void validate(const ModelParams& m) const
    {
        validate();
        if (!admissible(m))
            throw contour_error("contour radius violates r (1 + q r) < p");
    }
};

inline int default_nodes(int dimension)
{
    if (dimension <= 3)
        return 64;
    return dimension == 4 ? 32 : 24;
}

inline Contour default_contour(const ModelParams& m, int dimension = 1)
{
    return {m.p() / 2.0, default_nodes(dimension)};
}

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    long long nodes_used = 0;
};

inline constexpr int max_polydisc_dimension = 5;

// (1/2 pi i)^k times the integral over the k-fold circle, trapezoid rule in each variable.
// The error estimate compares against the rule on every second node.
template <class F>
QuadratureResult integrate_polydisc(F&& f, int k, const Contour& c)
{
    c.validate();
    if (k < 1 || k > max_polydisc_dimension)
        throw unsupported_size("polydisc dimension must lie in 1..5");
    const int M = c.nodes;
    std::vector<cplx> node(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j)
        node[static_cast<std::size_t>(j)] = std::polar(c.radius, 2.0 * std::numbers::pi * j / M);

    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<cplx> xi(static_cast<std::size_t>(k), node[0]);
    cplx full = 0.0, half = 0.0;
    long long count = 0;
    while (true) {
        cplx weight = 1.0;
        bool even = true;
        for (int d = 0; d < k; ++d) {
            weight *= xi[static_cast<std::size_t>(d)];
            even = even && idx[static_cast<std::size_t>(d)] % 2 == 0;
        }
        const cplx v = f(std::span<const cplx>(xi)) * weight;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw contour_error("integrand is not finite on the contour; radius misconfigured");
        full += v;
        if (even)
            half += v;
        ++count;

        int d = k - 1;
        while (d >= 0) {
            auto& i = idx[static_cast<std::size_t>(d)];
            if (++i < M) {
                xi[static_cast<std::size_t>(d)] = node[static_cast<std::size_t>(i)];
                break;
            }
            i = 0;
            xi[static_cast<std::size_t>(d)] = node[0];
            --d;
        }
        if (d < 0)
            break;
    }
    const double scale_full = std::pow(static_cast<double>(M), k);
    const double scale_half = std::pow(static_cast<double>(M / 2), k);
    QuadratureResult r;
    r.value = full / scale_full;
    r.error_estimate = std::abs(r.value - half / scale_half);
    r.nodes_used = count;
    return r;
}

} // namespace asep

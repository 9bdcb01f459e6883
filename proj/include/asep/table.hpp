#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "params.hpp"
#include "window.hpp"

namespace asep {

struct DistributionRow {
    long x = 0;
    double probability = 0.0;
    double error = 0.0;
    double imag_residual = 0.0;
};

struct DistributionTable {
    Window window{0, -1};
    std::vector<DistributionRow> rows;
    std::vector<std::string> warnings;

    const DistributionRow& at(long x) const
    {
        if (!window.contains(x))
            throw invalid_argument("x lies outside the table window");
        return rows[static_cast<std::size_t>(x - window.lo)];
    }

    double total() const
    {
        double s = 0.0;
        for (const auto& r : rows)
            s += r.probability;
        return s;
    }

    double max_imag_residual() const
    {
        double m = 0.0;
        for (const auto& r : rows)
            m = std::max(m, std::abs(r.imag_residual));
        return m;
    }

    double max_error() const
    {
        double m = 0.0;
        for (const auto& r : rows)
            m = std::max(m, r.error);
        return m;
    }

    bool satisfies_invariants(double floor = -1e-9, double excess = 1e-8) const
    {
        return std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return r.probability >= floor; }) &&
               total() <= 1.0 + excess;
    }
};

} // namespace asep

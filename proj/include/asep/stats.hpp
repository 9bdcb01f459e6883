#pragma once

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sim.hpp"
#include "table.hpp"

namespace asep {

// z-score of an empirical frequency against a reference probability, using the binomial
// spread of the reference so empty cells stay finite.
inline double z_score(double estimate, double reference, std::uint64_t replicas)
{
    const double p = std::clamp(reference, 0.0, 1.0);
    const double var = p * (1.0 - p) / static_cast<double>(replicas);
    if (var > 0.0)
        return (estimate - p) / std::sqrt(var);
    return estimate == p ? 0.0 : std::numeric_limits<double>::infinity();
}

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int cells = 0;
};

// Pearson test of observed counts against reference probabilities on a table window. Cells
// with expected count below min_expected are pooled together with everything outside the window.
inline ChiSquare chi_square_test(const MCEstimate& est, const DistributionTable& reference,
                                 double min_expected = 5.0)
{
    const double R = static_cast<double>(est.replicas);
    ChiSquare out;
    double pooled_expected = 0.0, pooled_observed = 0.0, seen_observed = 0.0, seen_expected = 0.0;
    for (const auto& row : reference.rows) {
        const double e = R * std::max(row.probability, 0.0);
        const double o = static_cast<double>(est.count_at(row.x));
        seen_observed += o;
        seen_expected += e;
        if (e < min_expected) {
            pooled_expected += e;
            pooled_observed += o;
            continue;
        }
        out.statistic += (o - e) * (o - e) / e;
        ++out.cells;
    }
    pooled_expected += std::max(0.0, R - seen_expected);
    pooled_observed += R - seen_observed;
    if (pooled_expected > 0.0) {
        out.statistic += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
        ++out.cells;
    } else if (pooled_observed > 0.0) {
        out.statistic = std::numeric_limits<double>::infinity();
        ++out.cells;
    }
    out.dof = std::max(1, out.cells - 1);
    out.p_value = std::isfinite(out.statistic)
                      ? boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic)
                      : 0.0;
    return out;
}

} // namespace asep

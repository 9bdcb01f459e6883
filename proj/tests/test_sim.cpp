#include <catch_amalgamated.hpp>

#include <asep/stats.hpp>

#include "oracles.hpp"

using namespace asep;

TEST_CASE("jump rules", "[sim]")
{
    ParticleState s{{0, 1, 3}, {2, 1, 2}, 0.0};
    attempt_jump(s, 0, +1); // first-class onto second-class: swap
    CHECK(s.positions == std::vector<long>{0, 1, 3});
    CHECK(s.species == std::vector<int>{1, 2, 2});
    attempt_jump(s, 0, +1); // second-class onto first-class: blocked
    CHECK(s.species == std::vector<int>{1, 2, 2});
    attempt_jump(s, 1, +1); // free site
    CHECK(s.positions == std::vector<long>{0, 2, 3});
    attempt_jump(s, 2, -1); // first-class onto first-class: blocked
    CHECK(s.positions == std::vector<long>{0, 2, 3});
    attempt_jump(s, 0, -1);
    CHECK(s.positions == std::vector<long>{-1, 2, 3});
}

TEST_CASE("time zero and time-ordering", "[sim]")
{
    const ModelParams m(0.7);
    const InitialConfig Y({-2, -1, 0});
    auto rng = replica_engine(5, 0);
    CHECK(simulate_once(m, Y, 0.0, rng) == 0);
    CHECK_THROWS_AS(simulate_once(m, Y, -1.0, rng), asep::invalid_argument);
}

TEST_CASE("estimates are reproducible and independent of the worker count", "[sim]")
{
    const ModelParams m(0.7);
    const InitialConfig Y({-2, -1, 0});
    const auto a = estimate_pmf(m, Y, 1.0, 20000, 42, SimulationMode::two_species, 1);
    const auto b = estimate_pmf(m, Y, 1.0, 20000, 42, SimulationMode::two_species, 3);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].x == b.rows[i].x);
        CHECK(a.rows[i].count == b.rows[i].count);
        CHECK(a.rows[i].mean == b.rows[i].mean);
    }
    const auto c = estimate_pmf(m, Y, 1.0, 20000, 43, SimulationMode::two_species, 1);
    bool differs = false;
    for (const auto& row : c.rows)
        differs = differs || row.count != a.count_at(row.x);
    CHECK(differs);
    CHECK_THROWS_AS(estimate_pmf(m, Y, 1.0, 0, 1), asep::invalid_argument);
}

TEST_CASE("single walker estimate matches the free walk", "[sim]")
{
    const ModelParams m(0.7);
    const std::uint64_t R = 200000;
    const auto est = estimate_pmf(m, InitialConfig({0}), 1.0, R, 9, SimulationMode::two_species, 2);
    for (long x = -4; x <= 6; ++x)
        CHECK(std::abs(z_score(est.mean_at(x), oracle_ref::biased_walk(0.7, 1.0, x), R)) < 4.5);
}

TEST_CASE("statistics helpers", "[sim]")
{
    CHECK(z_score(0.5, 0.5, 100) == 0.0);
    CHECK(std::abs(z_score(0.6, 0.5, 100) - 2.0) < 1e-12);
    CHECK(z_score(0.0, 0.0, 100) == 0.0);
    CHECK(std::isinf(z_score(0.1, 0.0, 100)));

    MCEstimate est{1, 1000, {{0, 0.5, 0.0, 500}, {1, 0.5, 0.0, 500}}};
    DistributionTable ref;
    ref.window = {0, 1};
    ref.rows = {{0, 0.5, 0.0, 0.0}, {1, 0.5, 0.0, 0.0}};
    const auto chi = chi_square_test(est, ref);
    CHECK(chi.statistic == 0.0);
    CHECK(chi.p_value == 1.0);

    MCEstimate skewed{1, 1000, {{0, 0.7, 0.0, 700}, {1, 0.3, 0.0, 300}}};
    CHECK(chi_square_test(skewed, ref).p_value < 1e-10);
}

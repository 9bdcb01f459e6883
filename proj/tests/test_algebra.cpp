#include <catch_amalgamated.hpp>

#include <asep/algebra.hpp>

#include "oracles.hpp"

using namespace asep;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Reference factors straight from their rational forms, labelled by value pairs.
struct Ref {
    const ModelParams& m;
    std::vector<cplx> xi;
    cplx d(int b, int a) const { return m.p() + m.q() * xi[a - 1] * xi[b - 1] - xi[a - 1]; }
    cplx S(int b, int a) const { return -(m.p() + m.q() * xi[a - 1] * xi[b - 1] - xi[b - 1]) / d(b, a); }
    cplx pT(int b, int a) const { return m.p() * (xi[b - 1] - xi[a - 1]) / d(b, a); }
    cplx Q(int b, int a) const { return S(b, a) - pT(b, a); }
};

} // namespace

TEST_CASE("model parameters reject the totally asymmetric endpoints", "[algebra]")
{
    CHECK_THROWS_AS(ModelParams(0.0), asep::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0), asep::invalid_argument);
    CHECK_THROWS_AS(ModelParams(-0.2), asep::invalid_argument);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams m(u(rng));
        CHECK(m.p() + m.q() == 1.0);
    }
}

TEST_CASE("factor special values", "[algebra]")
{
    const ModelParams m(0.7);
    std::mt19937_64 rng(11);
    for (auto a : oracle_ref::random_circle(rng, 10, 0.35)) {
        CHECK(rel(factor_S(m, a, 1.0), m.q() / m.p()) < 1e-14);
        CHECK(rel(factor_pT(m, a, 1.0), 1.0) < 1e-14);
    }
}

TEST_CASE("factor identities at random points", "[algebra]")
{
    const ModelParams m(0.63);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto z = oracle_ref::random_circle(rng, 2, 0.3);
        const cplx a = z[0], b = z[1];
        CHECK(std::abs(factor_Q(m, a, b) - (factor_S(m, a, b) - factor_pT(m, a, b))) < 1e-13);
        CHECK(std::abs(1.0 + factor_S(m, a, b) - factor_T(m, a, b)) < 1e-13);
        CHECK(rel(factor_P(m, a, b), (m.p() - m.q() * a) * (b - 1.0) / (m.p() + m.q() * a * b - a)) < 1e-14);
        CHECK(rel(factor_qT(m, a, b), m.q() * factor_T(m, a, b)) < 1e-15);
    }
}

TEST_CASE("degenerate denominator is reported", "[algebra]")
{
    const ModelParams m(0.5);
    // p + q a b - a = 0 with b = 0 needs a = p
    CHECK_THROWS_AS(factor_S(m, 0.5, 0.0), degenerate_denominator);
}

TEST_CASE("reduced words", "[algebra]")
{
    CHECK(reduced_word({1, 2, 3}).steps.empty());
    const auto w = reduced_word({3, 2, 1});
    REQUIRE(w.steps.size() == 3);
    // built right to left: T_1(2,1) first, then T_2(3,1), then T_1(3,2)
    CHECK(w.steps[0] == Transposition{0, 2, 1});
    CHECK(w.steps[1] == Transposition{1, 3, 1});
    CHECK(w.steps[2] == Transposition{0, 3, 2});

    for (int N = 1; N <= 5; ++N)
        for (const auto& sigma : all_permutations(N)) {
            const auto word = reduced_word(sigma);
            CHECK(static_cast<int>(word.steps.size()) == inversion_count(sigma));
            std::vector<int> s(static_cast<std::size_t>(N));
            std::iota(s.begin(), s.end(), 1);
            for (const auto& st : word.steps) {
                REQUIRE(s[st.slot] == st.alpha);
                REQUIRE(s[st.slot + 1] == st.beta);
                std::swap(s[st.slot], s[st.slot + 1]);
            }
            CHECK(s == sigma);
        }
    CHECK(all_reduced_words({3, 2, 1}).size() == 2);
    CHECK(all_reduced_words({4, 3, 2, 1}).size() == 16);
    CHECK_THROWS_AS(reduced_word({1, 1, 2}), asep::invalid_argument);
}

TEST_CASE("three-particle amplitudes reproduce the tabulated products", "[algebra]")
{
    const ModelParams m(0.7);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Ref r{m, oracle_ref::random_circle(rng, 3, 0.35)};
        struct Row {
            std::vector<int> sigma;
            cplx a221, a212, a122;
        };
        const std::vector<Row> table = {
            {{1, 2, 3}, 1.0, 0.0, 0.0},
            {{2, 1, 3}, r.S(2, 1), 0.0, 0.0},
            {{1, 3, 2}, r.Q(3, 2), r.pT(3, 2), 0.0},
            {{2, 3, 1}, r.S(2, 1) * r.Q(3, 1), r.pT(3, 1) * r.S(2, 1), 0.0},
            {{3, 1, 2}, r.S(3, 1) * r.Q(3, 2), r.pT(3, 2) * r.Q(3, 1), r.pT(3, 1) * r.pT(3, 2)},
            {{3, 2, 1}, r.S(2, 1) * r.S(3, 2) * r.Q(3, 1), r.pT(3, 1) * r.S(2, 1) * r.Q(3, 2),
             r.pT(3, 2) * r.pT(3, 1) * r.S(2, 1)},
        };
        for (const auto& row : table) {
            const auto col = sector_state(m, reduced_word(row.sigma), r.xi);
            const cplx expect[3] = {row.a122, row.a212, row.a221};
            for (int n = 0; n < 3; ++n) {
                if (expect[n] == 0.0)
                    CHECK(col[n] == 0.0);
                else
                    CHECK(rel(col[n], expect[n]) < 1e-12);
            }
        }
    }
}

TEST_CASE("split components reproduce their table and sum to the amplitude", "[algebra]")
{
    const ModelParams m(0.7);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Ref r{m, oracle_ref::random_circle(rng, 3, 0.35)};
        CHECK(rel(component_amplitude_N3(m, {1, 3, 2}, r.xi, 3, Sign::minus), -r.pT(3, 2)) < 1e-12);
        CHECK(rel(component_amplitude_N3(m, {3, 1, 2}, r.xi, 2, Sign::plus), r.pT(3, 2) * r.S(3, 1)) < 1e-12);
        CHECK(rel(component_amplitude_N3(m, {3, 2, 1}, r.xi, 2, Sign::minus), -r.pT(3, 2) * r.pT(3, 1) * r.S(2, 1)) < 1e-12);
        CHECK(component_amplitude_N3(m, {2, 3, 1}, r.xi, 2, Sign::minus) == 0.0);
        for (const auto& sigma : all_permutations(3))
            for (int n = 1; n <= 3; ++n) {
                const cplx sum = component_amplitude_N3(m, sigma, r.xi, n, Sign::plus) +
                                 component_amplitude_N3(m, sigma, r.xi, n, Sign::minus);
                const cplx a = amplitude(m, reduced_word(sigma), r.xi, n);
                CHECK(std::abs(sum - a) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
    }
    std::vector<cplx> four(4, 0.1);
    CHECK_THROWS_AS(component_amplitude_N3(m, {1, 2, 3, 4}, four, 1, Sign::plus), unsupported_size);
}

TEST_CASE("braid consistency over all reduced words", "[algebra]")
{
    const ModelParams m(0.62);
    std::mt19937_64 rng(99);
    for (int N = 2; N <= 4; ++N)
        for (const auto& sigma : all_permutations(N)) {
            const auto words = all_reduced_words(sigma);
            for (int trial = 0; trial < 20; ++trial) {
                const auto xi = oracle_ref::random_circle(rng, N, 0.31);
                const auto ref = sector_state(m, words.front(), xi);
                for (const auto& w : words) {
                    const auto col = sector_state(m, w, xi);
                    for (int n = 0; n < N; ++n)
                        REQUIRE(std::abs(col[n] - ref[n]) <= 1e-12 * std::max(1.0, std::abs(ref[n])));
                }
            }
        }
}

TEST_CASE("vanishing rule and single-species agreement", "[algebra]")
{
    const ModelParams m(0.55);
    std::mt19937_64 rng(4);
    for (int N = 1; N <= 4; ++N)
        for (const auto& sigma : all_permutations(N)) {
            const auto xi = oracle_ref::random_circle(rng, N, 0.27);
            const auto col = sector_state(m, reduced_word(sigma), xi);
            double mass = 0.0;
            cplx total = 0.0;
            for (int n = 1; n <= N; ++n) {
                if (inverse_at(sigma, N) > n)
                    CHECK(col[n - 1] == 0.0);
                mass += std::abs(col[n - 1]);
                total += col[n - 1];
            }
            CHECK(mass > 0.0);
            // forgetting which slot is second class recovers the single-species amplitude
            CHECK(std::abs(total - amplitude_single_species(m, sigma, xi)) <= 1e-13 * std::max(1.0, std::abs(total)));
        }
    const std::vector<cplx> xi2 = {0.2, cplx(0.1, 0.2)};
    CHECK(amplitude_single_species(m, {1, 2}, xi2) == 1.0);
    CHECK(rel(amplitude_single_species(m, {2, 1}, xi2), factor_S(m, xi2[0], xi2[1])) < 1e-15);
}

TEST_CASE("sector state stays inside the one-second-class sector", "[algebra]")
{
    // The column has exactly N slots; every step keeps that shape and never creates entries from nothing.
    const ModelParams m(0.7);
    const std::vector<cplx> xi = {0.2, cplx(0.0, 0.3), -0.25, cplx(0.1, -0.1)};
    const PointAlgebra alg{m, xi};
    SectorState s(4, 0.0);
    s.back() = 1.0;
    for (const auto& st : reduced_word({4, 3, 2, 1}).steps) {
        apply_step(alg, s, st);
        CHECK(s.size() == 4);
    }
    CHECK(s.front() != 0.0);
}

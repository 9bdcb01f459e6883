#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "params.hpp"

namespace asep {

enum class Factor { S, T, pT, qT, P, Q };

inline constexpr double degenerate_threshold = 1e-14;

// Denominator shared by every factor labelled (beta, alpha): p + q xi_a xi_b - xi_a.
inline cplx factor_denominator(const ModelParams& m, cplx xi_a, cplx xi_b)
{
    cplx d = m.p() + m.q() * xi_a * xi_b - xi_a;
    if (std::abs(d) < degenerate_threshold)
        throw degenerate_denominator("factor denominator vanishes; contour radius is not admissible");
    return d;
}

inline cplx factor_S(const ModelParams& m, cplx xi_a, cplx xi_b)
{
    return -(m.p() + m.q() * xi_a * xi_b - xi_b) / factor_denominator(m, xi_a, xi_b);
}

inline cplx factor_T(const ModelParams& m, cplx xi_a, cplx xi_b)
{
    return (xi_b - xi_a) / factor_denominator(m, xi_a, xi_b);
}

inline cplx factor_pT(const ModelParams& m, cplx xi_a, cplx xi_b) { return m.p() * factor_T(m, xi_a, xi_b); }
inline cplx factor_qT(const ModelParams& m, cplx xi_a, cplx xi_b) { return m.q() * factor_T(m, xi_a, xi_b); }

inline cplx factor_Q(const ModelParams& m, cplx xi_a, cplx xi_b)
{
    return (m.p() - m.q() * xi_b) * (xi_a - 1.0) / factor_denominator(m, xi_a, xi_b);
}

inline cplx factor_P(const ModelParams& m, cplx xi_a, cplx xi_b)
{
    return (m.p() - m.q() * xi_a) * (xi_b - 1.0) / factor_denominator(m, xi_a, xi_b);
}

inline cplx factor_value(const ModelParams& m, Factor f, cplx xi_a, cplx xi_b)
{
    switch (f) {
    case Factor::S: return factor_S(m, xi_a, xi_b);
    case Factor::T: return factor_T(m, xi_a, xi_b);
    case Factor::pT: return factor_pT(m, xi_a, xi_b);
    case Factor::qT: return factor_qT(m, xi_a, xi_b);
    case Factor::P: return factor_P(m, xi_a, xi_b);
    case Factor::Q: return factor_Q(m, xi_a, xi_b);
    }
    return 0.0;
}

// A factor F_{beta alpha}; labels are 1-based particle indices with alpha < beta.
struct FactorRef {
    Factor kind;
    int beta;
    int alpha;
};

// T_slot(beta, alpha): swaps the values alpha < beta sitting in 0-based slots (slot, slot + 1).
struct Transposition {
    int slot;
    int beta;
    int alpha;

    friend bool operator==(const Transposition&, const Transposition&) = default;
};

struct PermutationWord {
    std::vector<int> sigma;          // one-line notation, values 1..N
    std::vector<Transposition> steps; // application order: steps.front() acts first

    int size() const noexcept { return static_cast<int>(sigma.size()); }
};

inline void require_permutation(const std::vector<int>& sigma)
{
    std::vector<int> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1)
            throw invalid_argument("sigma is not a permutation of 1..N");
}

inline int inversion_count(const std::vector<int>& sigma)
{
    int inv = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            inv += sigma[i] > sigma[j];
    return inv;
}

inline int inverse_at(const std::vector<int>& sigma, int value)
{
    auto it = std::find(sigma.begin(), sigma.end(), value);
    return static_cast<int>(it - sigma.begin()) + 1;
}

// Bubble sort sigma down to the identity; the swaps read backwards build sigma from the identity.
inline PermutationWord reduced_word(const std::vector<int>& sigma)
{
    require_permutation(sigma);
    PermutationWord w{sigma, {}};
    std::vector<int> s = sigma;
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] > s[i + 1]) {
                w.steps.push_back({static_cast<int>(i), s[i], s[i + 1]});
                std::swap(s[i], s[i + 1]);
                swapped = true;
            }
        }
    }
    std::reverse(w.steps.begin(), w.steps.end());
    return w;
}

namespace detail {
inline void collect_words(std::vector<int>& s, std::vector<Transposition>& trail, const std::vector<int>& sigma,
                          std::vector<PermutationWord>& out)
{
    bool any = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] > s[i + 1]) {
            any = true;
            trail.push_back({static_cast<int>(i), s[i], s[i + 1]});
            std::swap(s[i], s[i + 1]);
            collect_words(s, trail, sigma, out);
            std::swap(s[i], s[i + 1]);
            trail.pop_back();
        }
    }
    if (!any)
        out.push_back({sigma, {trail.rbegin(), trail.rend()}});
}
} // namespace detail

inline std::vector<PermutationWord> all_reduced_words(const std::vector<int>& sigma)
{
    require_permutation(sigma);
    std::vector<PermutationWord> out;
    std::vector<int> s = sigma;
    std::vector<Transposition> trail;
    detail::collect_words(s, trail, sigma, out);
    return out;
}

inline std::vector<std::vector<int>> all_permutations(int N)
{
    std::vector<int> s(static_cast<std::size_t>(N));
    std::iota(s.begin(), s.end(), 1);
    std::vector<std::vector<int>> out;
    do
        out.push_back(s);
    while (std::next_permutation(s.begin(), s.end()));
    return out;
}

// Scalar algebra: amplitudes evaluated at a spectral point.
struct PointAlgebra {
    using value_type = cplx;

    const ModelParams& params;
    std::span<const cplx> xi; // xi[label - 1]

    value_type one() const { return 1.0; }
    value_type zero() const { return 0.0; }
    bool is_zero(const value_type& v) const { return v == 0.0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type negate(const value_type& a) const { return -a; }

    value_type apply(FactorRef f, const value_type& v) const
    {
        return factor_value(params, f.kind, xi[static_cast<std::size_t>(f.alpha - 1)],
                            xi[static_cast<std::size_t>(f.beta - 1)]) * v;
    }
};

template <class V>
using SectorColumn = std::vector<V>;

using SectorState = SectorColumn<cplx>;

// One R factor on slots (i, i+1). Entries not touching the pair pick up S; the pair mixes through
// the (P, pT / qT, Q) block. Structural zeros are never multiplied, so they stay exact.
template <class Alg>
void apply_step(const Alg& alg, SectorColumn<typename Alg::value_type>& amps, const Transposition& step)
{
    const auto apply = [&](Factor k, const typename Alg::value_type& v) {
        return alg.is_zero(v) ? alg.zero() : alg.apply({k, step.beta, step.alpha}, v);
    };
    const auto i = static_cast<std::size_t>(step.slot);
    for (std::size_t n = 0; n < amps.size(); ++n)
        if (n != i && n != i + 1)
            amps[n] = apply(Factor::S, amps[n]);
    auto left = amps[i];      // "1" in the left slot of the pair
    auto right = amps[i + 1]; // "1" in the right slot of the pair
    amps[i] = alg.add(apply(Factor::P, left), apply(Factor::pT, right));
    amps[i + 1] = alg.add(apply(Factor::Q, right), apply(Factor::qT, left));
}

template <class Alg>
SectorColumn<typename Alg::value_type> sector_column(const Alg& alg, const PermutationWord& w)
{
    SectorColumn<typename Alg::value_type> amps(w.sigma.size(), alg.zero());
    amps.back() = alg.one();
    for (const auto& step : w.steps)
        apply_step(alg, amps, step);
    return amps;
}

inline SectorState sector_state(const ModelParams& m, const PermutationWord& w, std::span<const cplx> spectral)
{
    if (spectral.size() != w.sigma.size())
        throw invalid_argument("spectral point count must equal N");
    return sector_column(PointAlgebra{m, spectral}, w);
}

// [A_sigma]_{nu_n, nu_N}
inline cplx amplitude(const ModelParams& m, const PermutationWord& w, std::span<const cplx> spectral, int n)
{
    if (n < 1 || n > w.size())
        throw invalid_argument("n must satisfy 1 <= n <= N");
    return sector_state(m, w, spectral)[static_cast<std::size_t>(n - 1)];
}

inline std::vector<FactorRef> inversion_factors(const std::vector<int>& sigma, Factor kind = Factor::S)
{
    std::vector<FactorRef> out;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j])
                out.push_back({kind, sigma[i], sigma[j]});
    return out;
}

// Signed product of factors.
struct ProductTerm {
    double sign = 1.0;
    std::vector<FactorRef> factors;
};

template <class Alg>
typename Alg::value_type evaluate_product(const Alg& alg, const ProductTerm& term)
{
    auto v = alg.one();
    for (const auto& f : term.factors)
        v = alg.apply(f, v);
    return term.sign < 0 ? alg.negate(v) : v;
}

inline cplx amplitude_single_species(const ModelParams& m, const std::vector<int>& sigma,
                                     std::span<const cplx> spectral)
{
    require_permutation(sigma);
    if (spectral.size() != sigma.size())
        throw invalid_argument("spectral point count must equal N");
    return evaluate_product(PointAlgebra{m, spectral}, ProductTerm{1.0, inversion_factors(sigma)});
}

enum class Sign { plus, minus };

namespace detail {
struct ComponentRow {
    std::array<int, 3> sigma;
    // index: 0 -> (n=3,+), 1 -> (n=3,-), 2 -> (n=2,+), 3 -> (n=2,-), 4 -> n=1
    std::array<std::optional<ProductTerm>, 5> entries;
};

inline const std::vector<ComponentRow>& component_rows_N3()
{
    using F = Factor;
    static const std::vector<ComponentRow> rows = {
        {{1, 2, 3}, {ProductTerm{1, {}}, {}, {}, {}, {}}},
        {{2, 1, 3}, {ProductTerm{1, {{F::S, 2, 1}}}, {}, {}, {}, {}}},
        {{1, 3, 2},
         {ProductTerm{1, {{F::S, 3, 2}}}, ProductTerm{-1, {{F::pT, 3, 2}}}, ProductTerm{1, {{F::pT, 3, 2}}}, {}, {}}},
        {{2, 3, 1},
         {ProductTerm{1, {{F::S, 2, 1}, {F::S, 3, 1}}}, ProductTerm{-1, {{F::pT, 3, 1}, {F::S, 2, 1}}},
          ProductTerm{1, {{F::pT, 3, 1}, {F::S, 2, 1}}}, {}, {}}},
        {{3, 1, 2},
         {ProductTerm{1, {{F::S, 3, 1}, {F::S, 3, 2}}}, ProductTerm{-1, {{F::pT, 3, 2}, {F::S, 3, 1}}},
          ProductTerm{1, {{F::pT, 3, 2}, {F::S, 3, 1}}}, ProductTerm{-1, {{F::pT, 3, 1}, {F::pT, 3, 2}}},
          ProductTerm{1, {{F::pT, 3, 1}, {F::pT, 3, 2}}}}},
        {{3, 2, 1},
         {ProductTerm{1, {{F::S, 2, 1}, {F::S, 3, 2}, {F::S, 3, 1}}},
          ProductTerm{-1, {{F::pT, 3, 1}, {F::S, 2, 1}, {F::S, 3, 2}}},
          ProductTerm{1, {{F::pT, 3, 1}, {F::S, 2, 1}, {F::S, 3, 2}}},
          ProductTerm{-1, {{F::pT, 3, 2}, {F::pT, 3, 1}, {F::S, 2, 1}}},
          ProductTerm{1, {{F::pT, 3, 2}, {F::pT, 3, 1}, {F::S, 2, 1}}}}},
    };
    return rows;
}
} // namespace detail

namespace detail {
// Entries [A_sigma]_{nu_n, nu_3} as products; index n - 1, nullopt marks a zero entry.
struct AmplitudeRow {
    std::array<int, 3> sigma;
    std::array<std::optional<ProductTerm>, 3> entries;
};

inline const std::vector<AmplitudeRow>& amplitude_rows_N3()
{
    using F = Factor;
    static const std::vector<AmplitudeRow> rows = {
        {{1, 2, 3}, {std::nullopt, std::nullopt, ProductTerm{1, {}}}},
        {{2, 1, 3}, {std::nullopt, std::nullopt, ProductTerm{1, {{F::S, 2, 1}}}}},
        {{1, 3, 2}, {std::nullopt, ProductTerm{1, {{F::pT, 3, 2}}}, ProductTerm{1, {{F::Q, 3, 2}}}}},
        {{2, 3, 1},
         {std::nullopt, ProductTerm{1, {{F::pT, 3, 1}, {F::S, 2, 1}}}, ProductTerm{1, {{F::S, 2, 1}, {F::Q, 3, 1}}}}},
        {{3, 1, 2},
         {ProductTerm{1, {{F::pT, 3, 1}, {F::pT, 3, 2}}}, ProductTerm{1, {{F::pT, 3, 2}, {F::Q, 3, 1}}},
          ProductTerm{1, {{F::S, 3, 1}, {F::Q, 3, 2}}}}},
        {{3, 2, 1},
         {ProductTerm{1, {{F::pT, 3, 2}, {F::pT, 3, 1}, {F::S, 2, 1}}},
          ProductTerm{1, {{F::pT, 3, 1}, {F::S, 2, 1}, {F::Q, 3, 2}}},
          ProductTerm{1, {{F::S, 2, 1}, {F::S, 3, 2}, {F::Q, 3, 1}}}}},
    };
    return rows;
}
} // namespace detail

// Closed-form three-particle amplitude, independent of the R-matrix construction.
inline cplx tabulated_amplitude_N3(const ModelParams& m, const std::vector<int>& sigma,
                                   std::span<const cplx> spectral, int n)
{
    if (sigma.size() != 3 || spectral.size() != 3)
        throw unsupported_size("tabulated amplitudes exist for N = 3 only");
    require_permutation(sigma);
    if (n < 1 || n > 3)
        throw invalid_argument("n must satisfy 1 <= n <= 3");
    for (const auto& row : detail::amplitude_rows_N3())
        if (std::equal(row.sigma.begin(), row.sigma.end(), sigma.begin())) {
            const auto& term = row.entries[static_cast<std::size_t>(n - 1)];
            return term ? evaluate_product(PointAlgebra{m, spectral}, *term) : cplx{0.0};
        }
    return 0.0;
}

// Table entry of the N = 3 split; nullopt marks a zero entry. For n = 1 the whole entry is the + part.
inline std::optional<ProductTerm> component_term_N3(const std::vector<int>& sigma, int n, Sign sign)
{
    if (sigma.size() != 3)
        throw unsupported_size("the +/- split is tabulated for N = 3 only");
    require_permutation(sigma);
    if (n < 1 || n > 3)
        throw invalid_argument("n must satisfy 1 <= n <= 3");
    for (const auto& row : detail::component_rows_N3()) {
        if (!std::equal(row.sigma.begin(), row.sigma.end(), sigma.begin()))
            continue;
        if (n == 1)
            return sign == Sign::plus ? row.entries[4] : std::nullopt;
        std::size_t idx = (n == 3 ? 0 : 2) + (sign == Sign::minus ? 1 : 0);
        return row.entries[idx];
    }
    return std::nullopt;
}

inline cplx component_amplitude_N3(const ModelParams& m, const std::vector<int>& sigma,
                                   std::span<const cplx> spectral, int n, Sign sign)
{
    if (spectral.size() != 3)
        throw unsupported_size("the +/- split is tabulated for N = 3 only");
    auto term = component_term_N3(sigma, n, sign);
    return term ? evaluate_product(PointAlgebra{m, spectral}, *term) : cplx{0.0};
}

} // namespace asep

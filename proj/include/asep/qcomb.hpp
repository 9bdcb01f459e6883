#pragma once

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "quadrature.hpp"

namespace asep {

template <class Real = double>
Real ipow(Real base, int e)
{
    Real r = 1;
    for (int i = 0; i < std::abs(e); ++i)
        r *= base;
    return e < 0 ? Real(1) / r : r;
}

template <class Real>
struct pq_pair {
    Real p, q;
    explicit pq_pair(const ModelParams& m) : p(static_cast<Real>(m.p())), q(Real(1) - static_cast<Real>(m.p())) {}
};

// [n] = (p^n - q^n)/(p - q), summed as p^{n-1} + p^{n-2} q + ... + q^{n-1} so p = q needs no limit.
template <class Real = double>
Real q_bracket(const ModelParams& m, int n)
{
    if (n < 0)
        throw invalid_argument("q_bracket needs n >= 0");
    const pq_pair<Real> w(m);
    Real s = 0;
    for (int k = 0; k < n; ++k)
        s += ipow(w.p, k) * ipow(w.q, n - 1 - k);
    return s;
}

template <class Real = double>
Real q_factorial(const ModelParams& m, int n)
{
    Real f = 1;
    for (int i = 1; i <= n; ++i)
        f *= q_bracket<Real>(m, i);
    return f;
}

template <class Real = double>
Real q_binomial(const ModelParams& m, int n, int k)
{
    if (n < 0 || k < 0)
        throw invalid_argument("q_binomial needs n, k >= 0");
    if (k > n)
        return 0;
    Real r = 1;
    for (int i = 1; i <= k; ++i)
        r *= q_bracket<Real>(m, n - k + i) / q_bracket<Real>(m, i);
    return r;
}

// Ordinary Gaussian binomial in a single base tau.
inline double gaussian_binomial(int n, int k, double tau)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < n - k + i; ++j)
            num += ipow(tau, j);
        for (int j = 0; j < i; ++j)
            den += ipow(tau, j);
        r *= num / den;
    }
    return r;
}

class SubsetIndex {
public:
    SubsetIndex(int N, std::vector<int> members) : N_(N), members_(std::move(members))
    {
        std::sort(members_.begin(), members_.end());
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (members_[i] < 1 || members_[i] > N_ || (i > 0 && members_[i] == members_[i - 1]))
                throw invalid_argument("subset members must be distinct values in 1..N");
        }
    }

    static SubsetIndex from_mask(int N, std::uint32_t mask)
    {
        std::vector<int> m;
        for (int i = 1; i <= N; ++i)
            if (mask & (1u << (i - 1)))
                m.push_back(i);
        return SubsetIndex(N, std::move(m));
    }

    int universe() const noexcept { return N_; }
    int size() const noexcept { return static_cast<int>(members_.size()); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<int>& members() const noexcept { return members_; }
    bool contains(int v) const { return std::binary_search(members_.begin(), members_.end(), v); }

    std::uint32_t mask() const
    {
        std::uint32_t m = 0;
        for (int v : members_)
            m |= 1u << (v - 1);
        return m;
    }

    SubsetIndex complement() const
    {
        std::vector<int> c;
        for (int i = 1; i <= N_; ++i)
            if (!contains(i))
                c.push_back(i);
        return SubsetIndex(N_, std::move(c));
    }

    long sum() const
    {
        long s = 0;
        for (int v : members_)
            s += v;
        return s;
    }

private:
    int N_;
    std::vector<int> members_;
};

// g_U(u): 1-based rank of u within U.
inline int rank_within(const std::vector<int>& U, int u)
{
    auto it = std::find(U.begin(), U.end(), u);
    if (it == U.end())
        throw invalid_argument("element is not a member of U");
    return static_cast<int>(it - U.begin()) + 1;
}

// Sigma_U(S) = sum of g_U(s) over s in S.
inline long sum_within(const std::vector<int>& U, const std::vector<int>& S)
{
    long s = 0;
    for (int v : S)
        s += rank_within(U, v);
    return s;
}

inline std::vector<SubsetIndex> nonempty_subsets(int N)
{
    std::vector<SubsetIndex> out;
    for (std::uint32_t mask = 1; mask < (1u << N); ++mask)
        out.push_back(SubsetIndex::from_mask(N, mask));
    return out;
}

// Weight of the S-integral in the second-class particle law.
template <class Real = double>
Real coefficient_cS(const ModelParams& m, int N, const SubsetIndex& S)
{
    if (S.empty() || S.universe() != N)
        throw invalid_argument("c_S needs a nonempty subset of 1..N");
    const pq_pair<Real> w(m);
    const int k = S.size();
    const auto Sc = S.complement();
    const int kc = Sc.size();
    const int sc = static_cast<int>(Sc.sum());
    Real prod = 1;
    if (S.contains(N)) {
        for (int i = 1; i <= k - 1; ++i)
            prod *= ipow(w.q, i) - ipow(w.p, i);
        const int e = sc - kc * (kc + 1) / 2;
        return prod * ipow(w.q, e) / ipow(w.p, e);
    }
    for (int i = 1; i <= k; ++i)
        prod *= ipow(w.q, i) - ipow(w.p, i);
    const int e = sc - kc * (kc - 1) / 2 - N;
    return prod * ipow(w.q, e) / ipow(w.p, e + k);
}

// Weight of the S-integral in the law of the rightmost particle (single species).
template <class Real = double>
Real coefficient_rightmost(const ModelParams& m, int N, const SubsetIndex& S)
{
    if (S.empty() || S.universe() != N)
        throw invalid_argument("coefficient needs a nonempty subset of 1..N");
    const pq_pair<Real> w(m);
    const auto Sc = S.complement();
    const int kc = Sc.size();
    const int sc = static_cast<int>(Sc.sum());
    return ipow(w.q, N * (N - 1) / 2 + sc - N * kc) / ipow(w.p, sc - kc * (kc + 1) / 2);
}

// Per-n weight; summing over n = 1..N gives coefficient_cS.
template <class Real = double>
Real coefficient_split(const ModelParams& m, int N, int n, const SubsetIndex& S)
{
    if (S.empty() || S.universe() != N)
        throw invalid_argument("coefficient needs a nonempty subset of 1..N");
    if (n < 1 || n > N)
        throw invalid_argument("n must satisfy 1 <= n <= N");
    const pq_pair<Real> w(m);
    const auto Sc = S.complement();
    const int kc = Sc.size();
    const int sc = static_cast<int>(Sc.sum());
    const int d = N - n;
    const Real sign = d % 2 ? -1 : 1;
    if (S.contains(N))
        return sign * ipow(w.q, n * (n - 1) / 2) * ipow(w.p, d * (d + 1) / 2) * ipow(w.q, sc - n * kc) /
               ipow(w.p, sc - kc * (kc + 1) / 2) * q_binomial<Real>(m, S.size() - 1, d);
    return sign * ipow(w.q, n * (n - 1) / 2) * ipow(w.p, d * (d - 1) / 2) * ipow(w.q, sc - n * kc - d) /
           ipow(w.p, sc - kc * (kc + 1) / 2 - d) * q_binomial<Real>(m, S.size(), d);
}

struct IdentityCheck {
    std::string name;
    double max_rel_error = 0.0;
    int evaluations = 0;
    bool passed = true;
};

struct IdentityReport {
    double tolerance = 1e-10;
    std::vector<IdentityCheck> checks;

    bool all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
};

namespace detail {
// Relative to the larger side, or to the summed term magnitudes when a side cancels.
inline double rel_error(cplx lhs, cplx rhs, double term_scale = 0.0)
{
    const double scale = std::max({std::abs(lhs), std::abs(rhs), term_scale});
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

inline void record(IdentityCheck& c, double err)
{
    c.max_rel_error = std::max(c.max_rel_error, err);
    ++c.evaluations;
}

inline std::vector<cplx> circle_points(std::mt19937_64& rng, int n, double radius)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<cplx> xi(static_cast<std::size_t>(n));
    for (auto& z : xi)
        z = std::polar(radius, angle(rng));
    return xi;
}

inline cplx t_product(const ModelParams& m, const std::vector<cplx>& xi, const std::vector<int>& labels)
{
    cplx prod = 1.0;
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a + 1; b < labels.size(); ++b)
            prod *= factor_T(m, xi[static_cast<std::size_t>(labels[a] - 1)], xi[static_cast<std::size_t>(labels[b] - 1)]);
    return prod;
}
} // namespace detail

inline IdentityReport verify_identities(const ModelParams& m, int n_max, int trials, std::uint64_t seed,
                                        double tolerance = 1e-10)
{
    if (n_max < 2 || n_max > 6)
        throw invalid_argument("identity checks need 2 <= n_max <= 6");
    if (trials < 1)
        throw invalid_argument("identity checks need at least one trial");
    std::mt19937_64 rng(seed);
    const double radius = default_contour(m).radius;
    const double p = m.p(), q = m.q();

    IdentityCheck q_split{"q_equals_s_minus_pt"}, s_shift{"one_plus_s_equals_t"};
    IdentityCheck subset_t{"subset_t_product_sum"}, alternating{"alternating_q_product"};
    IdentityCheck cauchy{"cauchy_binomial"}, weighted{"weighted_subset_sum"}, plain{"subset_sum_q_binomial"};

    for (int trial = 0; trial < trials; ++trial) {
        auto pair = detail::circle_points(rng, 2, radius);
        detail::record(q_split, detail::rel_error(factor_Q(m, pair[0], pair[1]),
                                                  factor_S(m, pair[0], pair[1]) - factor_pT(m, pair[0], pair[1])));
        detail::record(s_shift, detail::rel_error(1.0 + factor_S(m, pair[0], pair[1]), factor_T(m, pair[0], pair[1])));

        for (int n = 2; n <= n_max; ++n) {
            auto xi = detail::circle_points(rng, n, radius);
            std::vector<int> all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 1);
            const cplx full_t = detail::t_product(m, xi, all);
            cplx xi_prod = 1.0;
            for (auto z : xi)
                xi_prod *= z;

            std::vector<cplx> subset_sum(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<cplx> plain_sum(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<cplx> weighted_sum(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<double> subset_mag(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<double> plain_mag(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<double> weighted_mag(static_cast<std::size_t>(n + 1), 0.0);
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> in, out;
                for (int i = 1; i <= n; ++i)
                    (mask & (1u << (i - 1)) ? in : out).push_back(i);
                const auto k = in.size();

                cplx cross = 1.0;
                for (int a : in)
                    for (int b : out)
                        if (a < b)
                            cross *= factor_S(m, xi[static_cast<std::size_t>(a - 1)], xi[static_cast<std::size_t>(b - 1)]);
                const cplx subset_term = detail::t_product(m, xi, out) * detail::t_product(m, xi, in) * cross;
                subset_sum[k] += subset_term;
                subset_mag[k] += std::abs(subset_term);

                cplx w = 1.0, out_prod = 1.0;
                for (int i : in)
                    for (int j : out) {
                        const cplx xi_i = xi[static_cast<std::size_t>(i - 1)], xi_j = xi[static_cast<std::size_t>(j - 1)];
                        w *= (p + q * xi_i * xi_j - xi_i) / (xi_j - xi_i);
                    }
                for (int j : out)
                    out_prod *= xi[static_cast<std::size_t>(j - 1)];
                plain_sum[k] += w;
                plain_mag[k] += std::abs(w);
                weighted_sum[k] += w * (1.0 - out_prod);
                weighted_mag[k] += std::abs(w * (1.0 - out_prod));
            }
            for (int k = 0; k <= n; ++k) {
                const auto K = static_cast<std::size_t>(k);
                detail::record(subset_t, detail::rel_error(subset_sum[K], q_binomial(m, n, k) * full_t, subset_mag[K]));
                detail::record(plain, detail::rel_error(plain_sum[K], q_binomial(m, n, k), plain_mag[K]));
                if (k < n)
                    detail::record(weighted, detail::rel_error(weighted_sum[K], ipow(q, k) * q_binomial(m, n - 1, k) * (1.0 - xi_prod),
                                                               weighted_mag[K]));
            }
        }

        std::uniform_real_distribution<double> ydist(-1.5, 1.5), tdist(0.1, 1.5);
        const double y = ydist(rng), tau = tdist(rng);
        for (int n = 1; n <= n_max; ++n) {
            double lhs = 1.0, rhs = 0.0, mag = 0.0;
            for (int k = 1; k <= n; ++k)
                lhs *= 1.0 + y * ipow(tau, k);
            for (int k = 0; k <= n; ++k) {
                const double term = ipow(y, k) * ipow(tau, k * (k + 1) / 2) * gaussian_binomial(n, k, tau);
                rhs += term;
                mag += std::abs(term);
            }
            detail::record(cauchy, detail::rel_error(lhs, rhs, mag));
        }
    }

    for (int l = 1; l <= std::max(n_max + 1, 7); ++l) {
        double lhs = 1.0, rhs = 0.0, mag = 0.0;
        for (int i = 1; i <= l - 1; ++i)
            lhs *= ipow(q, i) - ipow(p, i);
        for (int k = 0; k <= l - 1; ++k) {
            const double term = (k % 2 ? -1.0 : 1.0) * q_binomial(m, l - 1, k) * ipow(p, k * (k + 1) / 2) *
                                ipow(q, (l - k) * (l - k - 1) / 2);
            rhs += term;
            mag += std::abs(term);
        }
        detail::record(alternating, detail::rel_error(lhs, rhs, mag));
    }

    IdentityReport report{tolerance, {q_split, s_shift, subset_t, alternating, cauchy, weighted, plain}};
    for (auto& c : report.checks)
        c.passed = c.max_rel_error <= tolerance;
    return report;
}

} // namespace asep

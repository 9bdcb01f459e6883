#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "algebra.hpp"
#include "qcomb.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "table.hpp"
#include "window.hpp"

namespace asep {

// laurent: residues taken exactly from Taylor coefficients of the rational part contracted with
// free-walk probabilities. trapezoid: the polydisc rule on the contour.
enum class Method { laurent, trapezoid };

// extended runs the residue sums in quad precision with a double shadow for the rounding
// estimate; standard runs double with a float shadow.
enum class Precision { standard, extended };

using real50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;
using real100 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>, boost::multiprecision::et_off>;

struct EvalOptions {
    Method method = Method::laurent;
    Precision precision = Precision::extended;
    std::optional<Contour> contour;
    double truncation_tolerance = 1e-22;
    std::size_t max_tensor_entries = std::size_t{1} << 23;
    // Residue rows whose error estimate exceeds target_error are recomputed with more digits
    // (quad, then 50 and 100 decimal digits).
    bool adaptive = true;
    double target_error = 1e-14;
};

inline constexpr double envelope_time = 5.0;
inline constexpr long envelope_offset = 30;
inline constexpr int envelope_particles = 5;

inline std::vector<std::string> envelope_warnings(const InitialConfig& Y, double t, long x_lo, long x_hi)
{
    std::vector<std::string> w;
    if (t > envelope_time)
        w.push_back("t exceeds the validated envelope t <= 5");
    if (Y.size() > envelope_particles)
        w.push_back("N exceeds the validated envelope N <= 5");
    if (x_lo < Y.leftmost() - envelope_offset || x_hi > Y.rightmost() + envelope_offset)
        w.push_back("x range exceeds the validated envelope |x - y_i| <= 30");
    return w;
}

struct KernelFunctions {
    // I(xi_S) = (prod xi - 1) / prod (xi - 1)
    static cplx I(std::span<const cplx> xi)
    {
        cplx prod = 1.0;
        for (auto z : xi)
            prod *= z;
        return (prod - 1.0) * J(xi);
    }

    // J(xi_S) = 1 / prod (xi - 1)
    static cplx J(std::span<const cplx> xi)
    {
        cplx den = 1.0;
        for (auto z : xi)
            den *= z - 1.0;
        return 1.0 / den;
    }

    // W_{t,x,Y_S}(xi_S) = prod xi_i^{x - y_i - 1} e^{(p/xi_i + q xi_i - 1) t}
    static cplx W(const ModelParams& m, double t, long x, std::span<const long> y, std::span<const cplx> xi)
    {
        cplx w = 1.0;
        for (std::size_t i = 0; i < xi.size(); ++i)
            w *= std::pow(xi[i], static_cast<int>(x - y[i] - 1)) * std::exp((m.p() / xi[i] + m.q() * xi[i] - 1.0) * t);
        return w;
    }
};

// Which weights multiply the subset integrals.
struct CoefficientRule {
    enum class Kind { second_class, rightmost, split, expanded_n3 };
    Kind kind = Kind::second_class;
    int n = 0;

    template <class Real>
    Real weight(const ModelParams& m, int N, const SubsetIndex& S) const
    {
        switch (kind) {
        case Kind::second_class: return coefficient_cS<Real>(m, N, S);
        case Kind::rightmost: return coefficient_rightmost<Real>(m, N, S);
        case Kind::split: return coefficient_split<Real>(m, N, n, S);
        case Kind::expanded_n3: return expanded_n3<Real>(m, S);
        }
        return 0;
    }

    // The seven weights of the explicit three-particle expansion, written out by hand.
    template <class Real>
    static Real expanded_n3(const ModelParams& m, const SubsetIndex& S)
    {
        if (S.universe() != 3)
            throw unsupported_size("the explicit expansion exists for N = 3 only");
        const pq_pair<Real> w(m);
        const Real p = w.p, q = w.q, d = q - p;
        switch (S.mask()) {
        case 0b111: return d * d;
        case 0b011: return d * d / (p * p);
        case 0b101: return q * d / p;
        case 0b110: return d;
        case 0b001: return q * d / (p * p);
        case 0b010: return d / p;
        case 0b100: return Real(1);
        }
        return 0;
    }
};

namespace detail {

// Depth of the Taylor box beyond the largest needed displacement, plus a margin used to
// estimate the truncation error.
inline constexpr int truncation_margin = 4;

// Coefficients of the rational part grow like p^{-k} along each axis, so a box reaching span sites
// to the left of the start needs the walk tail beyond it to absorb an extra factor p^{-span}.
inline int truncation_depth(const ModelParams& m, double t, double tolerance, long span = 0)
{
    const double rate = t / m.p();
    const double goal = std::log(tolerance) + static_cast<double>(span) * std::log(m.p());
    double log_term = 0.0;
    int L = 0;
    while (L < 8 || log_term > goal) {
        ++L;
        log_term += std::log(rate / L);
    }
    return L + truncation_margin;
}

template <class Real>
std::vector<Real> truncated_copy(std::span<const Real> g)
{
    std::vector<Real> out(g.begin(), g.end());
    for (std::size_t k = out.size() > truncation_margin ? out.size() - truncation_margin : 0; k < out.size(); ++k)
        out[k] = 0;
    return out;
}

inline std::size_t box_entries(const std::vector<int>& extents)
{
    std::size_t s = 1;
    for (int e : extents)
        s *= static_cast<std::size_t>(e);
    return s;
}

template <class Real>
struct DualSums {
    std::vector<Real> full;
    std::vector<Real> truncated;
};

// Taylor tensor of prod_{a<b in S} T_{ba} * I(xi_S), axes in increasing label order.
template <class Real>
TaylorTensor<Real> subset_rational(Real p, Real q, int k, const std::vector<int>& extents)
{
    TaylorTensor<Real> F(extents);
    F[0] = -1;
    if (std::all_of(extents.begin(), extents.end(), [](int e) { return e > 1; })) {
        std::vector<int> ones(static_cast<std::size_t>(k), 1);
        F[F.flat_index(ones)] += 1;
    }
    for (int a = 0; a < k; ++a)
        F.divide_shift(a);
    const auto t_num = factor_numerator<Real>(Factor::T, p, q);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            F.multiply(t_num, a, b);
            F.divide_pole(p, q, a, b);
        }
    return F;
}

template <class Real>
DualSums<Real> subset_sums_laurent(const ModelParams& m, const InitialConfig& Y, double t, long x_lo, long x_hi,
                                   const CoefficientRule& rule, const EvalOptions& opts)
{
    const int N = Y.size();
    const pq_pair<Real> w(m);
    long total_span = 0;
    for (int i = 0; i < N; ++i)
        total_span += std::max(0L, Y[i] - x_lo);
    const int L_max = truncation_depth(m, t, opts.truncation_tolerance, total_span);
    const long span = std::max(0L, Y.rightmost() - x_lo);
    const WalkKernel<Real> kernel(w.p, w.q, static_cast<Real>(t), x_lo - Y.rightmost(),
                                  x_hi - Y.leftmost() + L_max + span);
    const auto count = static_cast<std::size_t>(x_hi - x_lo + 1);
    DualSums<Real> out{std::vector<Real>(count, Real(0)), std::vector<Real>(count, Real(0))};

    for (const auto& S : nonempty_subsets(N)) {
        const Real c = rule.weight<Real>(m, N, S);
        const auto& labels = S.members();
        long subset_span = 0;
        for (int s : labels)
            subset_span += std::max(0L, Y[s - 1] - x_lo);
        const int L = truncation_depth(m, t, opts.truncation_tolerance, subset_span);
        std::vector<int> extents;
        for (int s : labels)
            extents.push_back(L + static_cast<int>(std::max(0L, Y[s - 1] - x_lo)));
        if (box_entries(extents) > opts.max_tensor_entries)
            throw envelope_exceeded("residue tensor exceeds the memory cap; reduce t, N or the x range");
        const auto F = subset_rational<Real>(w.p, w.q, S.size(), extents);

        for (long x = x_lo; x <= x_hi; ++x) {
            std::vector<std::span<const Real>> g, gt;
            std::vector<std::vector<Real>> store;
            store.reserve(labels.size());
            for (std::size_t a = 0; a < labels.size(); ++a) {
                g.push_back(kernel.window(x - Y[labels[a] - 1], extents[a]));
                store.push_back(truncated_copy<Real>(g.back()));
            }
            for (const auto& v : store)
                gt.emplace_back(v);
            const auto i = static_cast<std::size_t>(x - x_lo);
            out.full[i] += c * F.contract(g);
            out.truncated[i] += c * F.contract(gt);
        }
    }
    return out;
}

template <class Work, class Shadow>
DistributionTable subset_table_laurent(const ModelParams& m, const InitialConfig& Y, double t, long x_lo,
                                       long x_hi, const CoefficientRule& rule, const EvalOptions& opts)
{
    const auto w = subset_sums_laurent<Work>(m, Y, t, x_lo, x_hi, rule, opts);
    const auto s = subset_sums_laurent<Shadow>(m, Y, t, x_lo, x_hi, rule, opts);
    const double ratio = real_ops<Work>::to_double(real_ops<Work>::epsilon()) /
                         real_ops<Shadow>::to_double(real_ops<Shadow>::epsilon());
    DistributionTable table;
    table.window = {x_lo, x_hi};
    for (long x = x_lo; x <= x_hi; ++x) {
        const auto i = static_cast<std::size_t>(x - x_lo);
        const double truncation = real_ops<Work>::to_double(real_ops<Work>::abs(w.full[i] - w.truncated[i]));
        const double rounding =
            real_ops<Work>::to_double(real_ops<Work>::abs(w.full[i] - real_cast<Work>(s.full[i]))) * ratio;
        table.rows.push_back({x, real_ops<Work>::to_double(w.full[i]), truncation + rounding, 0.0});
    }
    return table;
}

inline DistributionTable subset_table_trapezoid(const ModelParams& m, const InitialConfig& Y, double t, long x_lo,
                                                long x_hi, const CoefficientRule& rule, const EvalOptions& opts)
{
    const int N = Y.size();
    DistributionTable table;
    table.window = {x_lo, x_hi};
    table.rows.reserve(static_cast<std::size_t>(x_hi - x_lo + 1));
    for (long x = x_lo; x <= x_hi; ++x)
        table.rows.push_back({x, 0.0, 0.0, 0.0});
    for (const auto& S : nonempty_subsets(N)) {
        const double c = rule.weight<double>(m, N, S);
        const auto& labels = S.members();
        const int k = S.size();
        const Contour contour = opts.contour.value_or(default_contour(m, k));
        contour.validate(m);
        std::vector<long> ys;
        for (int s : labels)
            ys.push_back(Y[s - 1]);
        for (long x = x_lo; x <= x_hi; ++x) {
            const auto integrand = [&](std::span<const cplx> xi) {
                cplx v = KernelFunctions::I(xi) * KernelFunctions::W(m, t, x, ys, xi);
                for (int a = 0; a < k; ++a)
                    for (int b = a + 1; b < k; ++b)
                        v *= factor_T(m, xi[static_cast<std::size_t>(a)], xi[static_cast<std::size_t>(b)]);
                return v;
            };
            const auto r = integrate_polydisc(integrand, k, contour);
            auto& row = table.rows[static_cast<std::size_t>(x - x_lo)];
            row.probability += c * r.value.real();
            row.imag_residual += c * r.value.imag();
            row.error += std::abs(c) * r.error_estimate;
        }
    }
    return table;
}

// Recomputes the rows whose error estimate misses the target, over the smallest covering range.
template <class Work, class Shadow>
void refine_rows(DistributionTable& table, const ModelParams& m, const InitialConfig& Y, double t,
                 const CoefficientRule& rule, const EvalOptions& opts)
{
    if (!opts.adaptive)
        return;
    std::optional<long> lo, hi;
    for (const auto& row : table.rows)
        if (!(row.error <= opts.target_error)) {
            if (!lo)
                lo = row.x;
            hi = row.x;
        }
    if (!lo)
        return;
    const auto better = subset_table_laurent<Work, Shadow>(m, Y, t, *lo, *hi, rule, opts);
    for (const auto& row : better.rows) {
        auto& old = table.rows[static_cast<std::size_t>(row.x - table.window.lo)];
        if (row.error < old.error)
            old = row;
    }
}

inline DistributionTable subset_table(const ModelParams& m, const InitialConfig& Y, double t, long x_lo, long x_hi,
                                      const CoefficientRule& rule, const EvalOptions& opts)
{
    if (t < 0.0)
        throw invalid_argument("t must be nonnegative");
    if (x_hi < x_lo)
        throw invalid_argument("empty x range");
    if (Y.size() > envelope_particles)
        throw unsupported_size("the subset expansion is supported for N <= 5");
    DistributionTable table;
    if (opts.method == Method::trapezoid) {
        table = subset_table_trapezoid(m, Y, t, x_lo, x_hi, rule, opts);
    } else {
        if (opts.precision == Precision::extended) {
            table = subset_table_laurent<extended_real, double>(m, Y, t, x_lo, x_hi, rule, opts);
        } else {
            table = subset_table_laurent<double, float>(m, Y, t, x_lo, x_hi, rule, opts);
            refine_rows<extended_real, double>(table, m, Y, t, rule, opts);
        }
        refine_rows<real50, extended_real>(table, m, Y, t, rule, opts);
        refine_rows<real100, real50>(table, m, Y, t, rule, opts);
    }
    if (opts.method == Method::laurent && table.max_error() > opts.target_error)
        table.warnings.push_back("error estimate exceeds the target even at the highest working precision");
    for (auto& w : envelope_warnings(Y, t, x_lo, x_hi))
        table.warnings.push_back(std::move(w));
    return table;
}

inline QuadratureResult single_entry(const DistributionTable& table)
{
    const auto& r = table.rows.front();
    return {cplx{r.probability, r.imag_residual}, r.error, 0};
}

} // namespace detail

// Law of the second-class particle on [x_lo, x_hi].
inline DistributionTable second_class_table(const ModelParams& m, const InitialConfig& Y, double t, long x_lo,
                                            long x_hi, const EvalOptions& opts = {})
{
    return detail::subset_table(m, Y, t, x_lo, x_hi, {CoefficientRule::Kind::second_class}, opts);
}

inline QuadratureResult second_class_pmf(const ModelParams& m, const InitialConfig& Y, double t, long x,
                                         const EvalOptions& opts = {})
{
    return detail::single_entry(second_class_table(m, Y, t, x, x, opts));
}

inline DistributionTable n3_expanded_table(const ModelParams& m, const InitialConfig& Y, double t, long x_lo,
                                           long x_hi, const EvalOptions& opts = {})
{
    if (Y.size() != 3)
        throw unsupported_size("the explicit expansion exists for N = 3 only");
    return detail::subset_table(m, Y, t, x_lo, x_hi, {CoefficientRule::Kind::expanded_n3}, opts);
}

inline QuadratureResult n3_expanded_pmf(const ModelParams& m, const InitialConfig& Y, double t, long x,
                                        const EvalOptions& opts = {})
{
    return detail::single_entry(n3_expanded_table(m, Y, t, x, x, opts));
}

// Law of the rightmost particle of the single-species process.
inline DistributionTable rightmost_single_species_table(const ModelParams& m, const InitialConfig& Y, double t,
                                                        long x_lo, long x_hi, const EvalOptions& opts = {})
{
    return detail::subset_table(m, Y, t, x_lo, x_hi, {CoefficientRule::Kind::rightmost}, opts);
}

inline QuadratureResult rightmost_single_species_pmf(const ModelParams& m, const InitialConfig& Y, double t, long x,
                                                     const EvalOptions& opts = {})
{
    return detail::single_entry(rightmost_single_species_table(m, Y, t, x, x, opts));
}

// Closed form of the n-th split term.
inline DistributionTable split_closed_form_table(const ModelParams& m, const InitialConfig& Y, double t, int n,
                                                 long x_lo, long x_hi, const EvalOptions& opts = {})
{
    return detail::subset_table(m, Y, t, x_lo, x_hi, {CoefficientRule::Kind::split, n}, opts);
}

// Radius at which |xi^{d} e^{(p/xi + q xi) t}| is stationary on the positive axis.
inline double saddle_radius(const ModelParams& m, double t, long d)
{
    if (t <= 0.0)
        return 0.5;
    const double a = m.q() * t, b = static_cast<double>(d), c = -m.p() * t;
    return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

// Free symmetric walk: one contour integral. Defaults to the saddle radius with 64 nodes,
// which is admissible here because the integrand has no pole besides the origin.
inline QuadratureResult symmetric_pmf(long y_N, double t, long x, std::optional<Contour> contour = std::nullopt)
{
    const ModelParams half(0.5);
    const long d = x - y_N;
    const Contour c = contour.value_or(Contour{saddle_radius(half, t, d), 64});
    return integrate_polydisc(
        [&](std::span<const cplx> xi) {
            return std::pow(xi[0], static_cast<int>(d - 1)) * std::exp((0.5 / xi[0] + 0.5 * xi[0] - 1.0) * t);
        },
        1, c);
}

// Which amplitude sits in front of the walk factors of a transition integral.
enum class AmplitudeKind { two_species, single_species, component_plus, component_minus };

namespace detail {

template <class Real>
class TransitionSeries {
public:
    TransitionSeries(const ModelParams& m, const InitialConfig& Y, double t, AmplitudeKind kind, long x_lo, long x_hi,
                     const EvalOptions& opts)
        : Y_(Y), sigmas_(all_permutations(Y.size()))
    {
        const int N = Y.size();
        const pq_pair<Real> w(m);
        const int L = truncation_depth(m, t, opts.truncation_tolerance);
        for (int j = 1; j <= N; ++j)
            extents_.push_back(L + static_cast<int>(std::max(0L, Y[j - 1] - x_lo)));
        if (box_entries(extents_) > opts.max_tensor_entries)
            throw envelope_exceeded("residue tensor exceeds the memory cap; reduce t, N or the x range");
        const long span = std::max(0L, Y.rightmost() - x_lo);
        kernel_.emplace(w.p, w.q, static_cast<Real>(t), x_lo - Y.rightmost(), x_hi - Y.leftmost() + L + span);

        std::vector<int> axis(static_cast<std::size_t>(N));
        std::iota(axis.begin(), axis.end(), 0);
        const SeriesAlgebra<Real> alg{w.p, w.q, extents_, axis};
        for (const auto& sigma : sigmas_) {
            std::vector<TaylorTensor<Real>> column(static_cast<std::size_t>(N));
            if (kind == AmplitudeKind::two_species) {
                column = sector_column(alg, reduced_word(sigma));
            } else if (kind == AmplitudeKind::single_species) {
                column.back() = evaluate_product(alg, ProductTerm{1.0, inversion_factors(sigma)});
            } else {
                const Sign sign = kind == AmplitudeKind::component_plus ? Sign::plus : Sign::minus;
                for (int n = 1; n <= N; ++n)
                    if (auto term = component_term_N3(sigma, n, sign))
                        column[static_cast<std::size_t>(n - 1)] = evaluate_product(alg, *term);
            }
            columns_.push_back(std::move(column));
        }
    }

    // Sum over sigma of the residue for target (X, nu_n); returns (full, truncated box).
    std::pair<Real, Real> evaluate(const std::vector<long>& X, int n) const
    {
        Real full = 0, trunc = 0;
        const int N = Y_.size();
        for (std::size_t s = 0; s < sigmas_.size(); ++s) {
            const auto& coeffs = columns_[s][static_cast<std::size_t>(n - 1)];
            if (coeffs.empty())
                continue;
            std::vector<std::span<const Real>> g, gt;
            std::vector<std::vector<Real>> store;
            store.reserve(static_cast<std::size_t>(N));
            for (int j = 1; j <= N; ++j) {
                const int i = inverse_at(sigmas_[s], j);
                g.push_back(kernel_->window(X[static_cast<std::size_t>(i - 1)] - Y_[j - 1], extents_[static_cast<std::size_t>(j - 1)]));
                store.push_back(truncated_copy<Real>(g.back()));
            }
            for (const auto& v : store)
                gt.emplace_back(v);
            full += coeffs.contract(g);
            trunc += coeffs.contract(gt);
        }
        return {full, trunc};
    }

private:
    InitialConfig Y_;
    std::vector<std::vector<int>> sigmas_;
    std::vector<int> extents_;
    std::optional<WalkKernel<Real>> kernel_;
    std::vector<std::vector<TaylorTensor<Real>>> columns_;
};

inline cplx amplitude_at(const ModelParams& m, AmplitudeKind kind, const std::vector<int>& sigma,
                         std::span<const cplx> xi, int n)
{
    switch (kind) {
    case AmplitudeKind::two_species: return amplitude(m, reduced_word(sigma), xi, n);
    case AmplitudeKind::single_species:
        return n == static_cast<int>(sigma.size()) ? amplitude_single_species(m, sigma, xi) : cplx{0.0};
    case AmplitudeKind::component_plus: return component_amplitude_N3(m, sigma, xi, n, Sign::plus);
    case AmplitudeKind::component_minus: return component_amplitude_N3(m, sigma, xi, n, Sign::minus);
    }
    return 0.0;
}

} // namespace detail

// Transition probabilities P_Y(X, nu_n; t), or their +/- components, for targets inside [x_lo, x_hi].
class TransitionEvaluator {
public:
    TransitionEvaluator(const ModelParams& m, const InitialConfig& Y, double t, long x_lo, long x_hi,
                        AmplitudeKind kind = AmplitudeKind::two_species, const EvalOptions& opts = {})
        : m_(m), Y_(Y), t_(t), lo_(x_lo), hi_(x_hi), kind_(kind), opts_(opts)
    {
        if (t < 0.0)
            throw invalid_argument("t must be nonnegative");
        if (Y.size() > 4)
            throw unsupported_size("transition probabilities are evaluated for N <= 4");
        if ((kind == AmplitudeKind::component_plus || kind == AmplitudeKind::component_minus) && Y.size() != 3)
            throw unsupported_size("the +/- split is tabulated for N = 3 only");
        if (opts.method == Method::laurent) {
            if (opts.precision == Precision::extended) {
                ext_.emplace(m, Y, t, kind, x_lo, x_hi, opts);
                dbl_.emplace(m, Y, t, kind, x_lo, x_hi, opts);
            } else {
                dbl_.emplace(m, Y, t, kind, x_lo, x_hi, opts);
                flt_.emplace(m, Y, t, kind, x_lo, x_hi, opts);
            }
        }
    }

    QuadratureResult operator()(const TargetConfig& X, int n) const
    {
        if (X.size() != Y_.size())
            throw invalid_argument("target and initial configurations differ in size");
        if (n < 1 || n > Y_.size())
            throw invalid_argument("n must satisfy 1 <= n <= N");
        if (X[0] < lo_ || X[X.size() - 1] > hi_)
            throw invalid_argument("target lies outside the evaluator range");
        if (opts_.method == Method::trapezoid)
            return trapezoid(X, n);
        if (ext_)
            return combine(*ext_, *dbl_, X, n);
        return combine(*dbl_, *flt_, X, n);
    }

private:
    template <class Work, class Shadow>
    static QuadratureResult combine(const detail::TransitionSeries<Work>& w, const detail::TransitionSeries<Shadow>& s,
                                    const TargetConfig& X, int n)
    {
        const auto [full, trunc] = w.evaluate(X.positions(), n);
        const auto shadow = s.evaluate(X.positions(), n).first;
        const double ratio = real_ops<Work>::to_double(real_ops<Work>::epsilon()) /
                             real_ops<Shadow>::to_double(real_ops<Shadow>::epsilon());
        QuadratureResult r;
        r.value = real_ops<Work>::to_double(full);
        r.error_estimate = real_ops<Work>::to_double(real_ops<Work>::abs(full - trunc)) +
                           real_ops<Work>::to_double(real_ops<Work>::abs(full - real_cast<Work>(shadow))) * ratio;
        return r;
    }

    QuadratureResult trapezoid(const TargetConfig& X, int n) const
    {
        const int N = Y_.size();
        const Contour c = opts_.contour.value_or(default_contour(m_, N));
        c.validate(m_);
        const auto sigmas = all_permutations(N);
        const auto integrand = [&](std::span<const cplx> xi) {
            cplx walk = 1.0;
            for (int i = 0; i < N; ++i)
                walk *= std::exp((m_.p() / xi[static_cast<std::size_t>(i)] + m_.q() * xi[static_cast<std::size_t>(i)] - 1.0) * t_);
            cplx total = 0.0;
            for (const auto& sigma : sigmas) {
                if (kind_ == AmplitudeKind::two_species && inverse_at(sigma, N) > n)
                    continue;
                const cplx a = detail::amplitude_at(m_, kind_, sigma, xi, n);
                if (a == 0.0)
                    continue;
                cplx mono = 1.0;
                for (int i = 0; i < N; ++i) {
                    const int j = sigma[static_cast<std::size_t>(i)];
                    mono *= std::pow(xi[static_cast<std::size_t>(j - 1)], static_cast<int>(X[i] - Y_[j - 1] - 1));
                }
                total += a * mono;
            }
            return total * walk;
        };
        return integrate_polydisc(integrand, N, c);
    }

    ModelParams m_;
    InitialConfig Y_;
    double t_;
    long lo_, hi_;
    AmplitudeKind kind_;
    EvalOptions opts_;
    std::optional<detail::TransitionSeries<extended_real>> ext_;
    std::optional<detail::TransitionSeries<double>> dbl_;
    std::optional<detail::TransitionSeries<float>> flt_;
};

inline QuadratureResult transition_probability(const ModelParams& m, const InitialConfig& Y, const TargetConfig& X,
                                               int n, double t, const EvalOptions& opts = {})
{
    if (X.size() != Y.size())
        throw invalid_argument("target and initial configurations differ in size");
    const TransitionEvaluator eval(m, Y, t, X[0], X[X.size() - 1], AmplitudeKind::two_species, opts);
    return eval(X, n);
}

// Calls fn(X) for every strictly increasing X in [lo, hi]^N with x_slot = x (slot is 1-based).
inline void for_each_configuration(int N, int slot, long x, long lo, long hi,
                                   const std::function<void(const std::vector<long>&)>& fn)
{
    std::vector<long> X(static_cast<std::size_t>(N));
    std::function<void(int, long)> rec = [&](int i, long min_value) {
        if (i == N) {
            fn(X);
            return;
        }
        if (i == slot - 1) {
            if (x < min_value || x > hi)
                return;
            X[static_cast<std::size_t>(i)] = x;
            rec(i + 1, x + 1);
            return;
        }
        const long cap = i < slot - 1 ? x - (slot - 1 - i) : hi - (N - 1 - i);
        for (long v = min_value; v <= cap; ++v) {
            X[static_cast<std::size_t>(i)] = v;
            rec(i + 1, v + 1);
        }
    };
    rec(0, lo);
}

struct ConfigurationSum {
    double value = 0.0;
    double error = 0.0;            // summed residue error estimates
    double truncation_tail = 0.0;  // Poisson bound on mass outside the box
    long configurations = 0;
};

namespace detail {
inline ConfigurationSum sum_over_slot(const TransitionEvaluator& eval, int N, int slot, int n, long x, Window box)
{
    ConfigurationSum s;
    for_each_configuration(N, slot, x, box.lo, box.hi, [&](const std::vector<long>& X) {
        const auto r = eval(TargetConfig(X), n);
        s.value += r.value.real();
        s.error += r.error_estimate;
        ++s.configurations;
    });
    return s;
}
} // namespace detail

inline constexpr double default_configuration_tail = 1e-10;

// Sum of single-species transition probabilities over configurations with x_N = x.
inline ConfigurationSum rightmost_configuration_sum(const ModelParams& m, const InitialConfig& Y, double t, long x,
                                                    double tail = default_configuration_tail,
                                                    EvalOptions opts = {})
{
    const int N = Y.size();
    const long K = tail_halfwidth(N, t, tail);
    const Window box{std::min(Y.leftmost() - K, x - N + 1), std::max(Y.rightmost() + K, x)};
    const TransitionEvaluator eval(m, Y, t, box.lo, box.hi, AmplitudeKind::single_species, opts);
    auto s = detail::sum_over_slot(eval, N, N, N, x, box);
    s.truncation_tail = N * poisson_tail(t, K);
    return s;
}

struct SplitCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double difference = 0.0;
    double lhs_error = 0.0;
    double rhs_error = 0.0;
    double truncation_tail = 0.0;
};

// Three particles: the configuration sums of the n-th +/- components against their closed form.
class SplitIdentity {
public:
    SplitIdentity(const ModelParams& m, const InitialConfig& Y, double t, double tail = default_configuration_tail,
                  EvalOptions opts = {})
        : m_(m), Y_(Y), t_(t), opts_(opts)
    {
        if (Y.size() != 3)
            throw unsupported_size("the +/- split is tabulated for N = 3 only");
        const long K = tail_halfwidth(3, t, tail);
        box_ = {Y.leftmost() - K, Y.rightmost() + K};
        tail_ = 3 * poisson_tail(t, K);
        plus_.emplace(m, Y, t, box_.lo, box_.hi, AmplitudeKind::component_plus, opts);
        minus_.emplace(m, Y, t, box_.lo, box_.hi, AmplitudeKind::component_minus, opts);
    }

    Window box() const noexcept { return box_; }

    SplitCheck check(long x, int n) const
    {
        if (n < 1 || n > 3)
            throw invalid_argument("n must satisfy 1 <= n <= 3");
        if (!box_.contains(x))
            throw invalid_argument("x lies outside the summation box");
        SplitCheck r;
        auto plus = detail::sum_over_slot(*plus_, 3, n, n, x, box_);
        r.lhs = plus.value;
        r.lhs_error = plus.error;
        if (n < 3) {
            auto minus = detail::sum_over_slot(*minus_, 3, n + 1, n + 1, x, box_);
            r.lhs += minus.value;
            r.lhs_error += minus.error;
        }
        const auto closed = split_closed_form_table(m_, Y_, t_, n, x, x, opts_);
        r.rhs = closed.rows.front().probability;
        r.rhs_error = closed.rows.front().error;
        r.difference = r.lhs - r.rhs;
        r.truncation_tail = tail_;
        return r;
    }

private:
    ModelParams m_;
    InitialConfig Y_;
    double t_;
    EvalOptions opts_;
    Window box_{0, -1};
    double tail_ = 0.0;
    std::optional<TransitionEvaluator> plus_, minus_;
};

inline SplitCheck split_identity_check_n3(const ModelParams& m, const InitialConfig& Y, double t, long x, int n,
                                          double tail = default_configuration_tail, EvalOptions opts = {})
{
    return SplitIdentity(m, Y, t, tail, opts).check(x, n);
}

} // namespace asep

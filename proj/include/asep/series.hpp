#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "algebra.hpp"

namespace asep {

template <class Real>
struct Monomial {
    Real coeff;
    int exp_a;
    int exp_b;
};

// Taylor coefficients of a function analytic on a polydisc, truncated to a box of multi-indices.
// Products with polynomials and divisions by the factor denominators are exact inside the box,
// since coefficient k only depends on coefficients <= k componentwise.
template <class Real>
class TaylorTensor {
public:
    TaylorTensor() = default;

    explicit TaylorTensor(std::vector<int> extents) : extents_(std::move(extents))
    {
        std::size_t size = 1;
        strides_.assign(extents_.size(), 1);
        for (std::size_t d = extents_.size(); d-- > 0;) {
            if (extents_[d] < 1)
                throw invalid_argument("tensor extents must be positive");
            strides_[d] = size;
            size *= static_cast<std::size_t>(extents_[d]);
        }
        data_.assign(size, Real(0));
    }

    static TaylorTensor constant(std::vector<int> extents, Real c)
    {
        TaylorTensor t(std::move(extents));
        t.data_[0] = c;
        return t;
    }

    bool empty() const noexcept { return data_.empty(); }
    int rank() const noexcept { return static_cast<int>(extents_.size()); }
    const std::vector<int>& extents() const noexcept { return extents_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<Real> data() noexcept { return data_; }
    std::span<const Real> data() const noexcept { return data_; }

    Real& operator[](std::size_t flat) { return data_[flat]; }
    const Real& operator[](std::size_t flat) const { return data_[flat]; }

    std::size_t flat_index(std::span<const int> k) const
    {
        std::size_t f = 0;
        for (std::size_t d = 0; d < k.size(); ++d)
            f += static_cast<std::size_t>(k[d]) * strides_[d];
        return f;
    }

    int coordinate(std::size_t flat, int axis) const
    {
        return static_cast<int>((flat / strides_[static_cast<std::size_t>(axis)]) %
                                static_cast<std::size_t>(extents_[static_cast<std::size_t>(axis)]));
    }

    // this *= sum of coeff * xi_a^exp_a * xi_b^exp_b
    void multiply(std::span<const Monomial<Real>> poly, int a, int b)
    {
        const std::size_t sa = strides_[static_cast<std::size_t>(a)], sb = strides_[static_cast<std::size_t>(b)];
        for (std::size_t f = data_.size(); f-- > 0;) {
            const int ka = coordinate(f, a), kb = coordinate(f, b);
            Real acc = 0;
            for (const auto& mono : poly)
                if (ka >= mono.exp_a && kb >= mono.exp_b)
                    acc += mono.coeff * data_[f - static_cast<std::size_t>(mono.exp_a) * sa -
                                              static_cast<std::size_t>(mono.exp_b) * sb];
            data_[f] = acc;
        }
    }

    // this /= p + q xi_a xi_b - xi_a
    void divide_pole(Real p, Real q, int a, int b)
    {
        const std::size_t sa = strides_[static_cast<std::size_t>(a)], sb = strides_[static_cast<std::size_t>(b)];
        for (std::size_t f = 0; f < data_.size(); ++f) {
            Real v = data_[f];
            if (coordinate(f, a) > 0) {
                v += data_[f - sa];
                if (coordinate(f, b) > 0)
                    v -= q * data_[f - sa - sb];
            }
            data_[f] = v / p;
        }
    }

    // this /= xi_a - 1
    void divide_shift(int a)
    {
        const std::size_t sa = strides_[static_cast<std::size_t>(a)];
        for (std::size_t f = 0; f < data_.size(); ++f)
            data_[f] = (coordinate(f, a) > 0 ? data_[f - sa] : Real(0)) - data_[f];
    }

    TaylorTensor& operator+=(const TaylorTensor& o)
    {
        for (std::size_t f = 0; f < data_.size(); ++f)
            data_[f] += o.data_[f];
        return *this;
    }

    void negate()
    {
        for (auto& v : data_)
            v = -v;
    }

    void scale(Real c)
    {
        for (auto& v : data_)
            v *= c;
    }

    // sum over k of coeff[k] * prod_j kernel_j[k_j]; kernels[j] must cover extents[j] entries.
    Real contract(const std::vector<std::span<const Real>>& kernels) const
    {
        std::vector<Real> cur(data_.begin(), data_.end());
        for (std::size_t d = extents_.size(); d-- > 0;) {
            const auto ext = static_cast<std::size_t>(extents_[d]);
            const auto& g = kernels[d];
            std::vector<Real> next(cur.size() / ext);
            for (std::size_t i = 0; i < next.size(); ++i) {
                Real acc = 0;
                const Real* row = cur.data() + i * ext;
                for (std::size_t k = 0; k < ext; ++k)
                    acc += row[k] * g[k];
                next[i] = acc;
            }
            cur.swap(next);
        }
        return cur[0];
    }

private:
    std::vector<int> extents_;
    std::vector<std::size_t> strides_;
    std::vector<Real> data_;
};

// Numerator of F_{beta alpha} written in (xi_alpha, xi_beta); the denominator is always
// p + q xi_alpha xi_beta - xi_alpha.
template <class Real>
std::vector<Monomial<Real>> factor_numerator(Factor f, Real p, Real q)
{
    switch (f) {
    case Factor::S: return {{-p, 0, 0}, {-q, 1, 1}, {Real(1), 0, 1}};
    case Factor::T: return {{Real(1), 0, 1}, {Real(-1), 1, 0}};
    case Factor::pT: return {{p, 0, 1}, {-p, 1, 0}};
    case Factor::qT: return {{q, 0, 1}, {-q, 1, 0}};
    case Factor::P: return {{p, 0, 1}, {-p, 0, 0}, {-q, 1, 1}, {q, 1, 0}};
    case Factor::Q: return {{p, 1, 0}, {-p, 0, 0}, {-q, 1, 1}, {q, 0, 1}};
    }
    return {};
}

// Amplitudes as truncated Taylor tensors; an empty tensor is a structural zero.
template <class Real>
struct SeriesAlgebra {
    using value_type = TaylorTensor<Real>;

    Real p;
    Real q;
    std::vector<int> extents;
    std::vector<int> axis_of; // axis_of[label - 1]

    value_type one() const { return value_type::constant(extents, Real(1)); }
    value_type zero() const { return value_type{}; }
    bool is_zero(const value_type& v) const { return v.empty(); }

    value_type add(const value_type& a, const value_type& b) const
    {
        if (a.empty())
            return b;
        if (b.empty())
            return a;
        value_type r = a;
        r += b;
        return r;
    }

    value_type negate(const value_type& a) const
    {
        value_type r = a;
        r.negate();
        return r;
    }

    value_type apply(FactorRef f, const value_type& v) const
    {
        if (v.empty())
            return v;
        const int a = axis_of[static_cast<std::size_t>(f.alpha - 1)];
        const int b = axis_of[static_cast<std::size_t>(f.beta - 1)];
        value_type r = v;
        const auto poly = factor_numerator(f.kind, p, q);
        r.multiply(poly, a, b);
        r.divide_pole(p, q, a, b);
        return r;
    }
};

// Probability that a free walker (right rate p, left rate q) is displaced by delta at time t:
// e^{-t} sum_b (pt)^{delta+b} (qt)^b / ((delta+b)! b!).
template <class Real>
Real walk_probability(Real p, Real q, Real t, long delta)
{
    if (t == Real(0))
        return delta == 0 ? Real(1) : Real(0);
    const long b0 = std::max(0L, -delta);
    const long a0 = b0 + delta;
    Real term = 1;
    for (long i = 1; i <= a0; ++i)
        term *= p * t / Real(i);
    for (long i = 1; i <= b0; ++i)
        term *= q * t / Real(i);
    Real sum = term;
    const Real eps = real_ops<Real>::epsilon();
    for (long b = b0, a = a0;; ++b, ++a) {
        term *= p * t * q * t / (Real(a + 1) * Real(b + 1));
        sum += term;
        if (term <= eps * sum && Real(a + 1) * Real(b + 1) > p * q * t * t)
            break;
    }
    return sum * real_ops<Real>::exp(-t);
}

// Walk probabilities on a contiguous range of displacements.
template <class Real>
class WalkKernel {
public:
    WalkKernel(Real p, Real q, Real t, long lo, long hi) : lo_(lo)
    {
        values_.reserve(static_cast<std::size_t>(std::max(0L, hi - lo + 1)));
        for (long d = lo; d <= hi; ++d)
            values_.push_back(walk_probability(p, q, t, d));
    }

    long lo() const noexcept { return lo_; }
    long hi() const noexcept { return lo_ + static_cast<long>(values_.size()) - 1; }

    // Values for displacements start, start + 1, ..., start + count - 1.
    std::span<const Real> window(long start, int count) const
    {
        if (start < lo_ || start + count - 1 > hi())
            throw invalid_argument("walk kernel range too small");
        return std::span<const Real>(values_).subspan(static_cast<std::size_t>(start - lo_), static_cast<std::size_t>(count));
    }

private:
    long lo_;
    std::vector<Real> values_;
};

} // namespace asep

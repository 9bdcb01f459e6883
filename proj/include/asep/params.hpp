#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#if defined(ASEP_HAVE_QUADMATH)
#include <quadmath.h>
#endif

namespace asep {

using cplx = std::complex<double>;

struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a factor denominator vanishes on the chosen contour.
struct degenerate_denominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unsupported_size : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct contour_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct window_too_small : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct envelope_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ModelParams {
public:
    explicit ModelParams(double p) : p_(p), q_(1.0 - p)
    {
        if (!(p > 0.0 && p < 1.0))
            throw invalid_argument("p must lie strictly inside (0, 1), got " + std::to_string(p));
    }

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool symmetric() const noexcept { return p_ == q_; }

private:
    double p_;
    double q_;
};

inline void require_increasing(const std::vector<long>& pos, const char* what)
{
    if (pos.empty())
        throw invalid_argument(std::string(what) + " must contain at least one position");
    for (std::size_t i = 1; i < pos.size(); ++i)
        if (pos[i] <= pos[i - 1])
            throw invalid_argument(std::string(what) + " must be strictly increasing");
}

// Y with species order 2...21: the second-class particle starts rightmost.
class InitialConfig {
public:
    explicit InitialConfig(std::vector<long> y) : y_(std::move(y)) { require_increasing(y_, "initial positions"); }

    int size() const noexcept { return static_cast<int>(y_.size()); }
    long operator[](int i) const { return y_[static_cast<std::size_t>(i)]; }
    const std::vector<long>& positions() const noexcept { return y_; }
    long leftmost() const { return y_.front(); }
    long rightmost() const { return y_.back(); }

    InitialConfig shifted(long k) const
    {
        auto y = y_;
        for (auto& v : y)
            v += k;
        return InitialConfig(std::move(y));
    }

private:
    std::vector<long> y_;
};

class TargetConfig {
public:
    explicit TargetConfig(std::vector<long> x) : x_(std::move(x)) { require_increasing(x_, "target positions"); }

    int size() const noexcept { return static_cast<int>(x_.size()); }
    long operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
    const std::vector<long>& positions() const noexcept { return x_; }

private:
    std::vector<long> x_;
};

// nu_n: N-1 first-class particles and one second-class particle in slot n (1-based).
struct SpeciesOrder {
    int N = 1;
    int n = 1;

    SpeciesOrder(int N_, int n_) : N(N_), n(n_)
    {
        if (N < 1 || n < 1 || n > N)
            throw invalid_argument("species order needs 1 <= n <= N");
    }

    std::string word() const
    {
        std::string w(static_cast<std::size_t>(N), '2');
        w[static_cast<std::size_t>(n - 1)] = '1';
        return w;
    }
};

#if defined(ASEP_HAVE_QUADMATH)
using extended_real = __float128;
#else
using extended_real = long double;
#endif

template <class Real>
struct real_ops {
    static Real exp(Real x) { using std::exp; return exp(x); }
    static Real abs(Real x) { using std::abs; return abs(x); }
    static double to_double(Real x) { return static_cast<double>(x); }
    static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
};

#if defined(ASEP_HAVE_QUADMATH)
template <>
struct real_ops<__float128> {
    static __float128 exp(__float128 x) { return expq(x); }
    static __float128 abs(__float128 x) { return fabsq(x); }
    static double to_double(__float128 x) { return static_cast<double>(x); }
    static __float128 epsilon() { return FLT128_EPSILON; }
};
#endif

// Conversion between working precisions. __float128 has no converting constructor into the
// multiprecision types, so it goes through a double-double split.
template <class To, class From>
To real_cast(const From& x)
{
#if defined(ASEP_HAVE_QUADMATH)
    if constexpr (std::is_same_v<From, __float128> && !std::is_same_v<To, __float128> &&
                  !std::is_floating_point_v<To>) {
        const double hi = static_cast<double>(x);
        const double lo = static_cast<double>(x - hi);
        return To(hi) + To(lo);
    } else
#endif
        return static_cast<To>(x);
}

} // namespace asep

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "params.hpp"
#include "table.hpp"
#include "window.hpp"

namespace asep {

struct LatticeState {
    std::vector<long> positions;
    int second = 1; // 1-based slot of the second-class particle
};

class StateSpace {
public:
    StateSpace(int N, Window window) : N_(N), window_(window)
    {
        if (N < 1)
            throw invalid_argument("state space needs N >= 1");
        if (window.size() < N)
            throw window_too_small("window holds fewer sites than particles");
        if (window.size() > 255)
            throw invalid_argument("window wider than 255 sites is not supported");
        std::vector<long> pos(static_cast<std::size_t>(N));
        enumerate(pos, 0, window.lo);
    }

    int particles() const noexcept { return N_; }
    Window window() const noexcept { return window_; }
    std::size_t size() const noexcept { return states_.size(); }
    const LatticeState& operator[](std::size_t i) const { return states_[i]; }

    // Index of a state, or -1 when some particle lies outside the window.
    long index_of(const std::vector<long>& positions, int second) const
    {
        for (long x : positions)
            if (!window_.contains(x))
                return -1;
        auto it = index_.find(key(positions, second));
        return it == index_.end() ? -1 : static_cast<long>(it->second);
    }

private:
    std::uint64_t key(const std::vector<long>& positions, int second) const
    {
        std::uint64_t k = static_cast<std::uint64_t>(second);
        for (long x : positions)
            k = k * 256u + static_cast<std::uint64_t>(x - window_.lo);
        return k;
    }

    void enumerate(std::vector<long>& pos, int i, long from)
    {
        if (i == N_) {
            for (int n = 1; n <= N_; ++n) {
                index_.emplace(key(pos, n), states_.size());
                states_.push_back({pos, n});
            }
            return;
        }
        for (long x = from; x <= window_.hi - (N_ - 1 - i); ++x) {
            pos[static_cast<std::size_t>(i)] = x;
            enumerate(pos, i + 1, x + 1);
        }
    }

    int N_;
    Window window_;
    std::vector<LatticeState> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

// Sparse generator. Jumps that would leave the window go to an absorbing outside state whose
// rate is kept per row as `leak`.
class GeneratorMatrix {
public:
    struct Entry {
        std::size_t target;
        double rate;
    };

    GeneratorMatrix(const ModelParams& m, const StateSpace& space) : rows_(space.size()), leak_(space.size(), 0.0),
                                                                     diagonal_(space.size(), 0.0)
    {
        const int N = space.particles();
        for (std::size_t s = 0; s < space.size(); ++s) {
            const auto& st = space[s];
            for (int k = 0; k < N; ++k) {
                for (int dir : {+1, -1}) {
                    const double rate = dir > 0 ? m.p() : m.q();
                    const long target = st.positions[static_cast<std::size_t>(k)] + dir;
                    const int nb = k + dir;
                    const bool occupied = nb >= 0 && nb < N && st.positions[static_cast<std::size_t>(nb)] == target;
                    std::vector<long> pos = st.positions;
                    int second = st.second;
                    if (!occupied) {
                        pos[static_cast<std::size_t>(k)] = target;
                    } else if (st.second == nb + 1 && st.second != k + 1) {
                        // a first-class particle jumps onto the second-class one: they swap
                        second = k + 1;
                    } else {
                        continue;
                    }
                    const long idx = space.index_of(pos, second);
                    if (idx < 0)
                        leak_[s] += rate;
                    else
                        rows_[s].push_back({static_cast<std::size_t>(idx), rate});
                }
            }
            double out = leak_[s];
            for (const auto& e : rows_[s])
                out += e.rate;
            diagonal_[s] = -out;
        }
    }

    std::size_t size() const noexcept { return rows_.size(); }
    const std::vector<Entry>& row(std::size_t s) const { return rows_[s]; }
    double leak(std::size_t s) const { return leak_[s]; }
    double diagonal(std::size_t s) const { return diagonal_[s]; }

private:
    std::vector<std::vector<Entry>> rows_;
    std::vector<double> leak_;
    std::vector<double> diagonal_;
};

struct OracleResult {
    StateSpace space;
    std::vector<double> probabilities;
    int truncation_order = 0;
    double leaked_mass = 0.0;
};

inline constexpr double default_oracle_epsilon = 1e-12;

// Uniformization with rate bound N: P(t) = sum_k Poisson(k; N t) U^k delta_(Y, nu_N).
inline OracleResult evolve(const ModelParams& m, const InitialConfig& Y, double t,
                           double epsilon = default_oracle_epsilon, std::optional<Window> window = std::nullopt)
{
    if (t < 0.0)
        throw invalid_argument("t must be nonnegative");
    if (!(epsilon > 0.0))
        throw invalid_argument("epsilon must be positive");
    const int N = Y.size();
    const Window w = window.value_or(particle_window(Y, t, epsilon));
    StateSpace space(N, w);
    const GeneratorMatrix G(m, space);
    const double lambda = N;

    std::vector<double> v(space.size(), 0.0), next(space.size(), 0.0), acc(space.size(), 0.0);
    const long start = space.index_of(Y.positions(), N);
    if (start < 0)
        throw window_too_small("initial configuration lies outside the window");
    v[static_cast<std::size_t>(start)] = 1.0;

    const double mean = lambda * t;
    double weight = std::exp(-mean);
    double cumulative = 0.0, leaked = 0.0, leaked_acc = 0.0;
    int k = 0;
    while (true) {
        for (std::size_t s = 0; s < v.size(); ++s)
            acc[s] += weight * v[s];
        leaked_acc += weight * leaked;
        cumulative += weight;
        if (1.0 - cumulative < epsilon || (k > mean && weight < epsilon * 1e-3))
            break;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < v.size(); ++s) {
            if (v[s] == 0.0)
                continue;
            next[s] += v[s] * (1.0 + G.diagonal(s) / lambda);
            for (const auto& e : G.row(s))
                next[e.target] += v[s] * e.rate / lambda;
            leaked += v[s] * G.leak(s) / lambda;
        }
        v.swap(next);
        ++k;
        weight *= mean / k;
    }
    if (leaked_acc > epsilon)
        throw window_too_small("probability mass reached the window boundary");
    return {std::move(space), std::move(acc), k, leaked_acc};
}

inline DistributionTable second_class_marginal(const OracleResult& r)
{
    const auto w = r.space.window();
    DistributionTable table;
    table.window = w;
    for (long x = w.lo; x <= w.hi; ++x)
        table.rows.push_back({x, 0.0, 0.0, 0.0});
    for (std::size_t s = 0; s < r.space.size(); ++s) {
        const auto& st = r.space[s];
        table.rows[static_cast<std::size_t>(st.positions[static_cast<std::size_t>(st.second - 1)] - w.lo)].probability +=
            r.probabilities[s];
    }
    return table;
}

// Law of the rightmost particle, whatever its species.
inline DistributionTable rightmost_marginal(const OracleResult& r)
{
    const auto w = r.space.window();
    DistributionTable table;
    table.window = w;
    for (long x = w.lo; x <= w.hi; ++x)
        table.rows.push_back({x, 0.0, 0.0, 0.0});
    for (std::size_t s = 0; s < r.space.size(); ++s)
        table.rows[static_cast<std::size_t>(r.space[s].positions.back() - w.lo)].probability += r.probabilities[s];
    return table;
}

} // namespace asep

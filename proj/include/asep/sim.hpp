#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "params.hpp"

namespace asep {

struct ParticleState {
    std::vector<long> positions;
    std::vector<int> species; // 1 marks the second-class particle, 2 first-class
    double time = 0.0;

    bool ordered() const
    {
        return std::adjacent_find(positions.begin(), positions.end(),
                                  [](long a, long b) { return a >= b; }) == positions.end();
    }
};

enum class SimulationMode {
    two_species,   // track the second-class particle
    single_species // every particle first-class; track the rightmost
};

inline ParticleState initial_state(const InitialConfig& Y, SimulationMode mode)
{
    ParticleState s{Y.positions(), std::vector<int>(static_cast<std::size_t>(Y.size()), 2), 0.0};
    if (mode == SimulationMode::two_species)
        s.species.back() = 1;
    return s;
}

// One clock ring: particle k tries to move one site in direction dir.
inline void attempt_jump(ParticleState& s, std::size_t k, int dir)
{
    const long target = s.positions[k] + dir;
    const bool has_nb = dir > 0 ? k + 1 < s.positions.size() : k > 0;
    const std::size_t nb = dir > 0 ? k + 1 : k - 1;
    if (!has_nb || s.positions[nb] != target) {
        s.positions[k] = target;
    } else if (s.species[k] > s.species[nb]) {
        std::swap(s.species[k], s.species[nb]);
    }
    assert(s.ordered());
}

// Engine for replica r of a run seeded with seed.
inline std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
    return std::mt19937_64(seq);
}

// Exact sample: one rate-N clock, a uniformly chosen particle, direction right with probability p.
template <class Engine>
long simulate_once(const ModelParams& m, const InitialConfig& Y, double t, Engine& rng,
                   SimulationMode mode = SimulationMode::two_species)
{
    if (t < 0.0)
        throw invalid_argument("t must be nonnegative");
    ParticleState s = initial_state(Y, mode);
    const int N = Y.size();
    std::exponential_distribution<double> wait(static_cast<double>(N));
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(N - 1));
    std::bernoulli_distribution right(m.p());
    while (true) {
        s.time += wait(rng);
        if (s.time > t)
            break;
        const auto k = pick(rng);
        attempt_jump(s, k, right(rng) ? +1 : -1);
    }
    if (mode == SimulationMode::single_species)
        return s.positions.back();
    const auto it = std::find(s.species.begin(), s.species.end(), 1);
    return s.positions[static_cast<std::size_t>(it - s.species.begin())];
}

struct MCRow {
    long x = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;
};

struct MCEstimate {
    std::uint64_t seed = 0;
    std::uint64_t replicas = 0;
    std::vector<MCRow> rows; // increasing x, only sites that were hit

    double mean_at(long x) const
    {
        auto it = std::lower_bound(rows.begin(), rows.end(), x, [](const MCRow& r, long v) { return r.x < v; });
        return it != rows.end() && it->x == x ? it->mean : 0.0;
    }

    std::uint64_t count_at(long x) const
    {
        auto it = std::lower_bound(rows.begin(), rows.end(), x, [](const MCRow& r, long v) { return r.x < v; });
        return it != rows.end() && it->x == x ? it->count : 0;
    }

    double max_stderr() const
    {
        double m = 0.0;
        for (const auto& r : rows)
            m = std::max(m, r.std_error);
        return m;
    }
};

inline unsigned default_workers()
{
    if (const char* env = std::getenv("ASEP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Replica r always draws from replica_engine(seed, r), so the merged counts do not depend on
// how replicas are split across workers.
inline MCEstimate estimate_pmf(const ModelParams& m, const InitialConfig& Y, double t, std::uint64_t replicas,
                               std::uint64_t seed, SimulationMode mode = SimulationMode::two_species,
                               unsigned workers = 0)
{
    if (replicas < 1)
        throw invalid_argument("replicas must be at least 1");
    if (workers == 0)
        workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, replicas));
    std::vector<std::map<long, std::uint64_t>> partial(workers);
    const auto run = [&](unsigned w) {
        const std::uint64_t begin = replicas * w / workers, end = replicas * (w + 1) / workers;
        for (std::uint64_t r = begin; r < end; ++r) {
            auto rng = replica_engine(seed, r);
            ++partial[w][simulate_once(m, Y, t, rng, mode)];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& th : pool)
            th.join();
    }
    std::map<long, std::uint64_t> counts;
    for (const auto& part : partial)
        for (const auto& [x, c] : part)
            counts[x] += c;
    MCEstimate est{seed, replicas, {}};
    const double R = static_cast<double>(replicas);
    for (const auto& [x, c] : counts) {
        const double mean = static_cast<double>(c) / R;
        est.rows.push_back({x, mean, std::sqrt(mean * (1.0 - mean) / R), c});
    }
    return est;
}

} // namespace asep

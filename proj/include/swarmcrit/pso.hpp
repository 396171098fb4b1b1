#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "swarmcrit/benchfns.hpp"
#include "swarmcrit/dynamics.hpp"
#include "swarmcrit/random.hpp"

namespace swarmcrit {

/// Cost function over a position; must be pure (it may be called concurrently).
using CostFunction = std::function<double(std::span<const double>)>;

struct Bounds {
    std::vector<Interval> dims;

    static Bounds cube(std::size_t dim, double lo = -100.0, double hi = 100.0);
    [[nodiscard]] std::size_t dim() const noexcept { return dims.size(); }
    void validate() const;
};

struct Particle {
    PhasePoint state;
    std::vector<double> p_best;
    double p_best_cost = 0.0;
};

struct SwarmState {
    std::vector<Particle> particles;
    std::vector<double> g_best;
    double g_best_cost = 0.0;
    std::size_t iteration = 0;
    bool diverged = false;
};

/// One independent random stream per particle for the velocity updates, so
/// that parallel and sequential stepping draw identical numbers.
class ParticleStreams {
public:
    ParticleStreams(std::uint64_t seed, std::size_t n_particles);

    RandomStream& operator[](std::size_t i) { return streams_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return streams_.size(); }

    /// Seed of particle i's update stream, for reproducing its draws.
    static std::uint64_t stream_seed(std::uint64_t seed, std::size_t i);

private:
    std::vector<RandomStream> streams_;
};

struct StepOptions {
    /// Test hook: hold every p_i and g at this point and skip best updates.
    std::optional<std::vector<double>> pinned_attractor;
    std::size_t jobs = 1;
};

/// Positions uniform in bounds, zero velocities, p_i at the start position.
SwarmState init_swarm(const SwarmParams& params, const Bounds& bounds, const CostFunction& f,
                      std::uint64_t seed, const StepOptions& options = {});

/// Synchronous update: every particle moves with the g of the previous
/// iteration; personal and global bests are updated after all moves, and only
/// on strict improvement. Non-finite positions are costed as +infinity and
/// mark the swarm as diverged.
SwarmState pso_step(const SwarmState& s, const SwarmParams& params, const CostFunction& f,
                    ParticleStreams& streams, const StepOptions& options = {});

struct RunResult {
    double best_cost = 0.0;
    std::vector<double> best_position;
    std::vector<double> cost_trace;  ///< g_best_cost after each iteration
    bool diverged = false;
    std::size_t evaluations = 0;     ///< N per iteration plus N for initialisation
};

RunResult optimize(const CostFunction& f, const SwarmParams& params, std::size_t iterations,
                   const Bounds& bounds, std::uint64_t seed, const StepOptions& options = {});

/// Convenience overload for suite benchmarks.
CostFunction as_cost(const BenchmarkFunction& f);

}  // namespace swarmcrit

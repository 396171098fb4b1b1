#include "swarmcrit/pso.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "swarmcrit/parallel.hpp"

namespace swarmcrit {

namespace {

constexpr std::uint64_t kInitKey = 0x1417;
constexpr std::uint64_t kStepKey = 0x57e9;

double safe_cost(const CostFunction& f, const PhasePoint& z) {
    if (!z.finite()) return std::numeric_limits<double>::infinity();
    const double c = f(z.x);
    return std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
}

void check_dimensions(const SwarmParams& params, std::size_t dim) {
    params.validate();
    if (params.dim != dim) throw std::invalid_argument("swarm dimension does not match bounds");
}

}  // namespace

Bounds Bounds::cube(std::size_t dim, double lo, double hi) {
    return Bounds{std::vector<Interval>(dim, Interval{lo, hi})};
}

void Bounds::validate() const {
    if (dims.empty()) throw std::invalid_argument("bounds have no dimensions");
    for (const auto& iv : dims) {
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw std::invalid_argument("bounds must be finite, non-empty intervals");
        }
    }
}

ParticleStreams::ParticleStreams(std::uint64_t seed, std::size_t n_particles) {
    streams_.reserve(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) streams_.emplace_back(stream_seed(seed, i));
}

std::uint64_t ParticleStreams::stream_seed(std::uint64_t seed, std::size_t i) {
    return derive_seed(seed, {kStepKey, i});
}

SwarmState init_swarm(const SwarmParams& params, const Bounds& bounds, const CostFunction& f,
                      std::uint64_t seed, const StepOptions& options) {
    bounds.validate();
    check_dimensions(params, bounds.dim());
    const std::size_t d = bounds.dim();
    if (options.pinned_attractor && options.pinned_attractor->size() != d) {
        throw std::invalid_argument("pinned attractor has the wrong dimension");
    }

    SwarmState s;
    s.particles.resize(params.n_particles);
    for (std::size_t i = 0; i < params.n_particles; ++i) {
        RandomStream rng(derive_seed(seed, {kInitKey, i}));
        Particle& p = s.particles[i];
        p.state = PhasePoint::zero(d);
        for (std::size_t j = 0; j < d; ++j) {
            const Interval& iv = bounds.dims[j];
            p.state.x[j] = iv.lo + (iv.hi - iv.lo) * rng.uniform();
        }
    }
    parallel_for(params.n_particles, options.jobs, [&](std::size_t i) {
        Particle& p = s.particles[i];
        if (options.pinned_attractor) {
            p.p_best = *options.pinned_attractor;
            p.p_best_cost = f(p.p_best);
        } else {
            p.p_best = p.state.x;
            p.p_best_cost = safe_cost(f, p.state);
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < s.particles.size(); ++i) {
        if (s.particles[i].p_best_cost < s.particles[best].p_best_cost) best = i;
    }
    s.g_best = s.particles[best].p_best;
    s.g_best_cost = s.particles[best].p_best_cost;
    return s;
}

SwarmState pso_step(const SwarmState& s, const SwarmParams& params, const CostFunction& f,
                    ParticleStreams& streams, const StepOptions& options) {
    const std::size_t n = s.particles.size();
    if (n == 0 || streams.size() != n) throw std::invalid_argument("pso_step: swarm/stream size mismatch");
    const std::size_t d = s.g_best.size();
    check_dimensions(params, d);

    SwarmState next = s;
    next.iteration = s.iteration + 1;
    std::vector<double> costs(n);

    parallel_for(n, options.jobs, [&](std::size_t i) {
        const Particle& old = s.particles[i];
        RandomStream& rng = streams[i];
        std::vector<double> r1(d);
        std::vector<double> r2(d);
        for (double& r : r1) r = rng.uniform();
        for (double& r : r2) r = rng.uniform();
        next.particles[i].state = step_affine(old.state, params, r1, r2, old.p_best, s.g_best);
        costs[i] = safe_cost(f, next.particles[i].state);
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (!next.particles[i].state.finite()) next.diverged = true;
    }
    if (options.pinned_attractor) return next;

    for (std::size_t i = 0; i < n; ++i) {
        Particle& p = next.particles[i];
        if (costs[i] < p.p_best_cost) {
            p.p_best = p.state.x;
            p.p_best_cost = costs[i];
        }
    }
    for (const Particle& p : next.particles) {
        if (p.p_best_cost < next.g_best_cost) {
            next.g_best = p.p_best;
            next.g_best_cost = p.p_best_cost;
        }
    }
    return next;
}

RunResult optimize(const CostFunction& f, const SwarmParams& params, std::size_t iterations,
                   const Bounds& bounds, std::uint64_t seed, const StepOptions& options) {
    SwarmState s = init_swarm(params, bounds, f, seed, options);
    ParticleStreams streams(seed, params.n_particles);

    RunResult result;
    result.evaluations = params.n_particles;
    result.cost_trace.reserve(iterations);
    for (std::size_t t = 0; t < iterations; ++t) {
        s = pso_step(s, params, f, streams, options);
        result.cost_trace.push_back(s.g_best_cost);
        result.evaluations += params.n_particles;
        result.diverged = result.diverged || s.diverged;
    }
    result.best_cost = s.g_best_cost;
    result.best_position = s.g_best;
    return result;
}

CostFunction as_cost(const BenchmarkFunction& f) {
    auto shared = std::make_shared<const BenchmarkFunction>(f);
    return [shared](std::span<const double> x) { return evaluate(*shared, x); };
}

}  // namespace swarmcrit

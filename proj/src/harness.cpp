#include "swarmcrit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string_view>

#include "swarmcrit/benchfns.hpp"
#include "swarmcrit/parallel.hpp"
#include "swarmcrit/pso.hpp"

namespace swarmcrit {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void check_increasing(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
}

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("grid needs lo <= hi and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
    }
    return out;
}

void SweepConfig::validate() const {
    check_increasing(omega_values, "omega");
    check_increasing(alpha_values, "alpha");
    if (alpha_values.front() <= 0.0) throw std::invalid_argument("alpha values must be positive");
    if (iterations == 0 || repetitions == 0) throw std::invalid_argument("iterations and repetitions must be positive");
    if (n_particles == 0 || dim == 0) throw std::invalid_argument("n_particles and dim must be positive");
}

std::vector<std::string> SweepConfig::function_ids() const {
    if (!functions.empty()) return functions;
    std::vector<std::string> ids;
    for (const auto& f : suite(dim, suite_seed)) ids.push_back(f.id);
    return ids;
}

SweepGrid run_sweep(const SweepConfig& config) {
    config.validate();
    const std::vector<std::string> ids = config.function_ids();
    std::vector<BenchmarkFunction> functions;
    functions.reserve(ids.size());
    for (const auto& id : ids) functions.push_back(suite_member(id, config.dim, config.suite_seed));

    const std::size_t n_omega = config.omega_values.size();
    const std::size_t n_alpha = config.alpha_values.size();
    const std::size_t n_cells = functions.size() * n_omega * n_alpha;
    SweepGrid grid;
    grid.cells.resize(n_cells);
    const Bounds bounds = Bounds::cube(config.dim);

    parallel_for(n_cells, config.jobs, [&](std::size_t cell) {
        const std::size_t fi = cell / (n_omega * n_alpha);
        const std::size_t oi = (cell / n_alpha) % n_omega;
        const std::size_t ai = cell % n_alpha;
        const BenchmarkFunction& fn = functions[fi];
        const CostFunction cost = [&fn](std::span<const double> x) { return evaluate(fn, x); };

        SwarmParams params;
        params.omega = config.omega_values[oi];
        const MixtureWeight w = weight_for(config.split, config.alpha_values[ai]);
        params.alpha1 = w.alpha1();
        params.alpha2 = w.alpha2();
        params.n_particles = config.n_particles;
        params.dim = config.dim;

        std::vector<double> best(config.repetitions);
        std::size_t diverged = 0;
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            const std::uint64_t seed = derive_seed(config.master_seed, {fnv1a(fn.id), oi, ai, rep});
            const RunResult r = optimize(cost, params, config.iterations, bounds, seed);
            best[rep] = r.best_cost;
            if (r.diverged) ++diverged;
        }

        SweepCell& out = grid.cells[cell];
        out.function = fn.id;
        out.omega = params.omega;
        out.alpha = config.alpha_values[ai];
        out.iterations = config.iterations;
        double sum = 0.0;
        for (double b : best) sum += b;
        out.mean_best_cost = sum / static_cast<double>(best.size());
        out.median_best_cost = median_of(best);
        out.divergence_fraction = static_cast<double>(diverged) / static_cast<double>(config.repetitions);
        out.repetitions = config.repetitions;
    });
    return grid;
}

std::vector<AggregateCell> aggregate(const SweepGrid& grid) {
    std::map<std::string, std::pair<double, double>> range;
    auto log_cost = [](const SweepCell& c) { return std::log10(std::max(c.mean_best_cost, 1e-15)); };
    for (const SweepCell& c : grid.cells) {
        const double l = log_cost(c);
        auto [it, fresh] = range.try_emplace(c.function, l, l);
        if (!fresh) {
            it->second.first = std::min(it->second.first, l);
            it->second.second = std::max(it->second.second, l);
        }
    }

    std::map<std::pair<double, double>, std::pair<double, std::size_t>> acc;
    for (const SweepCell& c : grid.cells) {
        const auto [lo, hi] = range.at(c.function);
        const double norm = hi > lo ? (log_cost(c) - lo) / (hi - lo) : 0.0;
        auto& slot = acc[{c.omega, c.alpha}];
        slot.first += norm;
        slot.second += 1;
    }

    std::vector<AggregateCell> out;
    out.reserve(acc.size());
    for (const auto& [key, value] : acc) {
        out.push_back(AggregateCell{key.first, key.second, value.first / static_cast<double>(value.second)});
    }
    return out;
}

std::vector<AggregateCell> best_region(const std::vector<AggregateCell>& cells, double quantile) {
    if (cells.empty()) throw std::invalid_argument("best_region of an empty grid");
    if (!(quantile > 0.0 && quantile <= 1.0)) throw std::invalid_argument("quantile must lie in (0, 1]");
    std::vector<double> costs;
    costs.reserve(cells.size());
    for (const auto& c : cells) costs.push_back(c.normalized_cost);
    std::sort(costs.begin(), costs.end());
    const auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(costs.size()) - 1e-9));
    const double threshold = costs[std::clamp<std::size_t>(rank, 1, costs.size()) - 1];

    std::vector<AggregateCell> out;
    for (const auto& c : cells) {
        if (c.normalized_cost <= threshold) out.push_back(c);
    }
    return out;
}

std::vector<AggregateCell> best_region(const SweepGrid& grid, double quantile) {
    return best_region(aggregate(grid), quantile);
}

std::optional<double> interpolate_curve(const CriticalCurve& curve, double omega) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve.points) {
        if (p.status == CriticalStatus::Resolved && p.alpha) pts.emplace_back(p.omega, *p.alpha);
    }
    if (pts.empty()) return std::nullopt;
    std::sort(pts.begin(), pts.end());
    constexpr double eps = 1e-12;
    if (omega < pts.front().first - eps || omega > pts.back().first + eps) return std::nullopt;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(omega - pts[i].first) <= eps) return pts[i].second;
        if (i + 1 < pts.size() && omega > pts[i].first && omega < pts[i + 1].first) {
            const double t = (omega - pts[i].first) / (pts[i + 1].first - pts[i].first);
            return pts[i].second + t * (pts[i + 1].second - pts[i].second);
        }
    }
    return std::nullopt;
}

DistanceSummary distance_to_curve(std::span<const AggregateCell> cells, const CriticalCurve& curve) {
    DistanceSummary s;
    std::vector<double> d;
    for (const auto& c : cells) {
        const auto ac = interpolate_curve(curve, c.omega);
        if (!ac) {
            ++s.skipped;
            continue;
        }
        d.push_back(std::abs(c.alpha - *ac));
    }
    s.measured = d.size();
    if (d.empty()) return s;
    double sum = 0.0;
    for (double x : d) sum += x;
    s.mean = sum / static_cast<double>(d.size());
    s.max = *std::max_element(d.begin(), d.end());
    s.median = median_of(std::move(d));
    return s;
}

}  // namespace swarmcrit

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmcrit/stability.hpp"

namespace swarmcrit {

/// Inclusive grid lo, lo + step, ..., hi (values rounded to 1e-12).
std::vector<double> make_grid(double lo, double hi, double step);

struct SweepConfig {
    std::vector<double> omega_values = make_grid(-1.1, 1.1, 0.1);
    std::vector<double> alpha_values = make_grid(0.25, 5.0, 0.25);
    MixtureRatio split = MixtureRatio::Equal;
    std::size_t iterations = 2000;
    std::size_t repetitions = 100;
    std::vector<std::string> functions;  ///< suite ids; empty selects the whole suite
    std::size_t n_particles = 25;
    std::size_t dim = 10;
    std::uint64_t master_seed = 1;
    std::uint64_t suite_seed = 1;  ///< shifts and rotations of the benchmark instances
    std::size_t jobs = 1;

    void validate() const;
    /// Resolved function ids in sweep order.
    [[nodiscard]] std::vector<std::string> function_ids() const;
};

struct SweepCell {
    std::string function;
    double omega = 0.0;
    double alpha = 0.0;
    std::size_t iterations = 0;
    double mean_best_cost = 0.0;
    double median_best_cost = 0.0;
    double divergence_fraction = 0.0;
    std::size_t repetitions = 0;
};

/// One record per (function, omega, alpha), function-major then omega then alpha.
struct SweepGrid {
    std::vector<SweepCell> cells;
};

struct AggregateCell {
    double omega = 0.0;
    double alpha = 0.0;
    double normalized_cost = 0.0;
};

/// Runs every cell; repetition seeds are derived from
/// (master_seed, function, omega index, alpha index, repetition).
SweepGrid run_sweep(const SweepConfig& config);

/// Per-function min-max normalisation of log10(mean_best_cost), averaged
/// over functions for each (omega, alpha). Sorted by omega, then alpha.
std::vector<AggregateCell> aggregate(const SweepGrid& grid);

/// Cells whose normalised cost lies within the best `quantile` fraction
/// (nearest rank; ties at the threshold are included). quantile in (0, 1].
std::vector<AggregateCell> best_region(const std::vector<AggregateCell>& cells, double quantile = 0.1);
std::vector<AggregateCell> best_region(const SweepGrid& grid, double quantile = 0.1);

struct DistanceSummary {
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::size_t measured = 0;
    std::size_t skipped = 0;  ///< cells outside the resolved part of the curve
};

/// Linear interpolation of the resolved curve points; empty outside their omega range.
std::optional<double> interpolate_curve(const CriticalCurve& curve, double omega);

/// |alpha - alpha_c(omega)| over the cells.
DistanceSummary distance_to_curve(std::span<const AggregateCell> cells, const CriticalCurve& curve);

}  // namespace swarmcrit

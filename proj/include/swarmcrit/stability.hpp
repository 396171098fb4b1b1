#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmcrit/dynamics.hpp"
#include "swarmcrit/random.hpp"

namespace swarmcrit {

/// How the total attraction alpha is split between personal and global best.
enum class MixtureRatio { Equal, SocialOnly };

MixtureWeight weight_for(MixtureRatio ratio, double alpha);
std::string to_string(MixtureRatio ratio);
/// Accepts "equal" and "social" / "social-only"; throws std::invalid_argument otherwise.
MixtureRatio parse_ratio(const std::string& text);

/// Source of the coefficient r for the one-particle random matrix product.
/// Either the mixture law or a pinned constant (the deterministic hook).
class CoefficientLaw {
public:
    CoefficientLaw(const MixtureWeight& weight) : weight_(weight) {}  // NOLINT: implicit on purpose
    static CoefficientLaw pinned(double alpha, double r);

    [[nodiscard]] double alpha() const noexcept { return weight_.alpha(); }
    [[nodiscard]] const MixtureWeight& weight() const noexcept { return weight_; }
    [[nodiscard]] const std::optional<double>& pinned_r() const noexcept { return pinned_r_; }

    double sample(RandomStream& rng) const {
        return pinned_r_ ? *pinned_r_ : sample_mixture(rng, weight_);
    }

private:
    MixtureWeight weight_;
    std::optional<double> pinned_r_;
};

struct LyapunovBudget {
    std::size_t steps = 100000;
    std::size_t trials = 32;
    std::size_t burn_in = 1000;

    void validate() const;
};

/// Monte-Carlo estimate of a Lyapunov exponent, natural log per step.
struct LyapunovEstimate {
    double value = 0.0;
    double std_error = 0.0;  ///< standard error across independent trials
    std::size_t steps = 0;
    std::size_t trials = 0;
    std::size_t burn_in = 0;
};

/// Top Lyapunov exponent of the product of random step matrices, estimated
/// along renormalised orbits started from random directions. Throws
/// NumericError if an orbit collapses to zero or leaves the finite range.
LyapunovEstimate lyapunov_exponent(double omega, const CoefficientLaw& law,
                                   const LyapunovBudget& budget, std::uint64_t seed);

struct LyapunovPair {
    LyapunovEstimate top;
    /// -infinity (with zero std_error) when the matrices are singular.
    LyapunovEstimate second;
};

/// Both exponents via per-step Gram-Schmidt re-orthonormalisation of a 2-frame.
LyapunovPair lyapunov_pair(double omega, const CoefficientLaw& law,
                           const LyapunovBudget& budget, std::uint64_t seed);

/// Probability mass over the direction angle atan2(v, x) in [0, 2*pi).
struct AngularHistogram {
    std::vector<double> mass;
    std::size_t samples = 0;

    [[nodiscard]] std::size_t bins() const noexcept { return mass.size(); }
    [[nodiscard]] double bin_width() const noexcept;
    [[nodiscard]] double bin_center(std::size_t i) const noexcept;
    [[nodiscard]] std::size_t bin_of(double angle) const noexcept;
};

struct StationaryOptions {
    std::size_t bins = 128;
    std::size_t samples = 1000000;  ///< pooled over all chains
    std::size_t burn_in = 1000;
    std::size_t chains = 4;

    void validate() const;
};

/// Empirical stationary measure of the projective dynamics a -> Ma/|Ma|.
AngularHistogram stationary_distribution(double omega, const CoefficientLaw& law,
                                         const StationaryOptions& options, std::uint64_t seed);

/// Draws directions from the histogram (uniform within a bin), applies one
/// random step and re-bins. A stationary histogram is a fixed point up to noise.
AngularHistogram pushforward(const AngularHistogram& hist, double omega, const CoefficientLaw& law,
                             std::size_t samples, std::uint64_t seed);

double l1_distance(const AngularHistogram& a, const AngularHistogram& b);

/// L1 distance between the two half-circle halves of the histogram, i.e. between
/// each bin and its antipode. Requires an even bin count.
double antipodal_asymmetry(const AngularHistogram& hist);

/// Modal direction of a measure that is symmetric under a -> a + pi. The two
/// antipodal halves are folded together and the mode is reported on the
/// representative half-circle [pi/2, 3*pi/2), i.e. directions with x <= 0.
double folded_mode(const AngularHistogram& hist);

struct EscapeOptions {
    double r_in = 1e-6;
    double r_out = 1e6;
    std::size_t max_steps = 1000000;
    std::size_t trials = 10000;

    void validate() const;
};

struct EscapeStats {
    double p_converged = 0.0;
    double p_escaped = 0.0;
    double p_undecided = 0.0;
    std::size_t trials = 0;
    double r_in = 0.0;
    double r_out = 0.0;
    std::size_t max_steps = 0;
};

/// First-passage statistics of |(x, v)| from the unit circle to r_in or r_out.
EscapeStats escape_probability(double omega, const CoefficientLaw& law,
                               const EscapeOptions& options, std::uint64_t seed);

enum class CriticalStatus { Resolved, NoCrossing, Unresolved };
enum class CurveMethod { LyapunovBisection, EscapeEquality, NeutralEquality };

std::string to_string(CriticalStatus status);
std::string to_string(CurveMethod method);

struct CriticalPoint {
    double omega = 0.0;
    std::optional<double> alpha;  ///< empty unless status == Resolved
    /// Standard error of alpha, propagated from the statistic's error through
    /// the local slope of the statistic across the final bracket.
    double std_error = 0.0;
    CriticalStatus status = CriticalStatus::Unresolved;
    double statistic = 0.0;        ///< lambda, or the probability imbalance, at alpha
    double statistic_error = 0.0;  ///< its standard error
};

struct CriticalCurve {
    std::vector<CriticalPoint> points;
    MixtureRatio ratio = MixtureRatio::Equal;
    CurveMethod method = CurveMethod::LyapunovBisection;
};

/// Controls for the stochastic bisection on alpha.
struct BisectionOptions {
    double alpha_min = 0.01;
    double alpha_max = 8.0;
    double significance = 3.0;        ///< endpoint signs need |stat| > significance * std_error
    std::size_t max_escalations = 3;  ///< each escalation doubles steps and trials
    LyapunovBudget lyapunov{10000, 16, 1000};
    EscapeOptions escape{1e-6, 1e6, 1000000, 10000};
    std::size_t jobs = 1;  ///< worker threads for curve production
};

/// alpha where the top Lyapunov exponent changes sign, by stochastic bisection.
CriticalPoint critical_alpha(double omega, MixtureRatio ratio, double tolerance, std::uint64_t seed,
                             const BisectionOptions& options = {});

/// alpha where reaching r_in and escaping beyond r_out are equally likely.
CriticalPoint escape_critical_alpha(double omega, MixtureRatio ratio, double tolerance,
                                    std::uint64_t seed, const BisectionOptions& options = {});

/// critical_alpha (or escape_critical_alpha) over a grid of omegas. Per-point
/// failures are recorded in the point status.
CriticalCurve critical_curve(const std::vector<double>& omega_grid, MixtureRatio ratio,
                             double tolerance, std::uint64_t seed, const BisectionOptions& options = {},
                             CurveMethod method = CurveMethod::LyapunovBisection);

/// (1/t) log <|(x_t, v_t)|> over repetitions of the one-dimensional affine
/// dynamics with fixed p and g, started uniformly on the circle of radius
/// z0_scale around the origin. Throws NumericError on overflow.
double finite_time_lyapunov(double omega, const MixtureWeight& weight, double z0_scale, double p,
                            double g, std::size_t steps, std::size_t repetitions, std::uint64_t seed);

/// Neutral-stability experiment with distinct attractors. The particle starts
/// on the circle of radius kappa around g; after `iterations` steps it counts
/// as converged when its phase-plane distance to the segment joining g and p
/// is below kappa, and as diverged otherwise.
struct ScalingConfig {
    double kappa = 1.0;
    double p = 0.1;
    double g = 0.0;
    std::size_t iterations = 200;
    std::size_t repetitions = 100000;

    void validate() const;
};

/// Fraction converged minus fraction diverged, with its standard error.
struct NeutralBalance {
    double balance = 0.0;
    double std_error = 0.0;
};

NeutralBalance neutral_balance(double omega, const MixtureWeight& weight, const ScalingConfig& config,
                               std::uint64_t seed);

CriticalCurve neutral_stability_curve(const ScalingConfig& config, const std::vector<double>& omega_grid,
                                      double tolerance, std::uint64_t seed,
                                      MixtureRatio ratio = MixtureRatio::Equal,
                                      const BisectionOptions& options = {});

}  // namespace swarmcrit

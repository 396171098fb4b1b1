#include "swarmcrit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "swarmcrit/errors.hpp"
#include "swarmcrit/parallel.hpp"

namespace swarmcrit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PlanarPoint random_unit(RandomStream& rng) {
    const double angle = kTwoPi * rng.uniform();
    return PlanarPoint{std::sin(angle), std::cos(angle)};
}

double direction_angle(const PlanarPoint& z) {
    double a = std::atan2(z.v, z.x);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

struct Moments {
    double mean = 0.0;
    double std_error = 0.0;
};

Moments trial_moments(const std::vector<double>& values) {
    Moments m;
    const auto n = static_cast<double>(values.size());
    m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double x : values) ss += (x - m.mean) * (x - m.mean);
        m.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return m;
}

// Renormalises z in place and returns the norm before renormalisation.
double renormalise(PlanarPoint& z, std::size_t step) {
    const double n = z.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("renormalisation failed", step);
    z.v /= n;
    z.x /= n;
    return n;
}

LyapunovBudget scaled(const LyapunovBudget& b, std::size_t level) {
    return LyapunovBudget{b.steps << level, b.trials << level, b.burn_in};
}

}  // namespace

MixtureWeight weight_for(MixtureRatio ratio, double alpha) {
    return ratio == MixtureRatio::Equal ? MixtureWeight::equal(alpha) : MixtureWeight::social_only(alpha);
}

std::string to_string(MixtureRatio ratio) {
    return ratio == MixtureRatio::Equal ? "equal" : "social-only";
}

MixtureRatio parse_ratio(const std::string& text) {
    if (text == "equal") return MixtureRatio::Equal;
    if (text == "social" || text == "social-only") return MixtureRatio::SocialOnly;
    throw std::invalid_argument("unknown mixture ratio '" + text + "' (expected equal or social)");
}

CoefficientLaw CoefficientLaw::pinned(double alpha, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("pinned r must lie in [0, 1]");
    CoefficientLaw law(MixtureWeight::equal(alpha));
    law.pinned_r_ = r;
    return law;
}

void LyapunovBudget::validate() const {
    if (steps == 0) throw std::invalid_argument("lyapunov budget needs steps > 0");
    if (trials < 2) throw std::invalid_argument("lyapunov budget needs at least 2 trials for a standard error");
}

LyapunovEstimate lyapunov_exponent(double omega, const CoefficientLaw& law,
                                   const LyapunovBudget& budget, std::uint64_t seed) {
    budget.validate();
    const double alpha = law.alpha();
    std::vector<double> per_trial(budget.trials);

    for (std::size_t trial = 0; trial < budget.trials; ++trial) {
        RandomStream rng(derive_seed(seed, {trial}));
        PlanarPoint z = random_unit(rng);
        for (std::size_t s = 0; s < budget.burn_in; ++s) {
            z = step_homogeneous(z, StepMatrix{omega, alpha, law.sample(rng)});
            renormalise(z, s);
        }
        double sum = 0.0;
        for (std::size_t s = 0; s < budget.steps; ++s) {
            z = step_homogeneous(z, StepMatrix{omega, alpha, law.sample(rng)});
            sum += std::log(renormalise(z, budget.burn_in + s));
        }
        per_trial[trial] = sum / static_cast<double>(budget.steps);
    }

    const Moments m = trial_moments(per_trial);
    return LyapunovEstimate{m.mean, m.std_error, budget.steps, budget.trials, budget.burn_in};
}

LyapunovPair lyapunov_pair(double omega, const CoefficientLaw& law, const LyapunovBudget& budget,
                           std::uint64_t seed) {
    budget.validate();
    const double alpha = law.alpha();
    const bool singular = omega == 0.0;
    std::vector<double> top(budget.trials);
    std::vector<double> second(budget.trials);

    for (std::size_t trial = 0; trial < budget.trials; ++trial) {
        RandomStream rng(derive_seed(seed, {trial}));
        PlanarPoint q1 = random_unit(rng);
        PlanarPoint q2{q1.x, -q1.v};
        double sum1 = 0.0;
        double sum2 = 0.0;
        const std::size_t total = budget.burn_in + budget.steps;
        for (std::size_t s = 0; s < total; ++s) {
            const StepMatrix m{omega, alpha, law.sample(rng)};
            PlanarPoint a1 = step_homogeneous(q1, m);
            PlanarPoint a2 = step_homogeneous(q2, m);

            const double r11 = renormalise(a1, s);
            const double proj = a1.v * a2.v + a1.x * a2.x;
            a2.v -= proj * a1.v;
            a2.x -= proj * a1.x;
            const double r22 = a2.norm();
            q1 = a1;
            if (singular || !(r22 > 0.0)) {
                q2 = PlanarPoint{q1.x, -q1.v};
            } else {
                q2 = PlanarPoint{a2.v / r22, a2.x / r22};
            }
            if (s >= budget.burn_in) {
                sum1 += std::log(r11);
                if (!singular) sum2 += std::log(r22);
            }
        }
        top[trial] = sum1 / static_cast<double>(budget.steps);
        second[trial] = sum2 / static_cast<double>(budget.steps);
    }

    LyapunovPair out;
    const Moments m1 = trial_moments(top);
    out.top = LyapunovEstimate{m1.mean, m1.std_error, budget.steps, budget.trials, budget.burn_in};
    if (singular) {
        out.second = LyapunovEstimate{-std::numeric_limits<double>::infinity(), 0.0, budget.steps,
                                      budget.trials, budget.burn_in};
    } else {
        const Moments m2 = trial_moments(second);
        out.second = LyapunovEstimate{m2.mean, m2.std_error, budget.steps, budget.trials, budget.burn_in};
    }
    return out;
}

double AngularHistogram::bin_width() const noexcept { return kTwoPi / static_cast<double>(mass.size()); }

double AngularHistogram::bin_center(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) * bin_width();
}

std::size_t AngularHistogram::bin_of(double angle) const noexcept {
    const auto b = static_cast<std::size_t>(angle / bin_width());
    return std::min(b, mass.size() - 1);
}

void StationaryOptions::validate() const {
    if (bins < 64) throw std::invalid_argument("stationary histogram needs at least 64 bins");
    if (chains < 2) throw std::invalid_argument("stationary histogram needs at least 2 chains");
    if (samples < chains) throw std::invalid_argument("fewer samples than chains");
}

AngularHistogram stationary_distribution(double omega, const CoefficientLaw& law,
                                         const StationaryOptions& options, std::uint64_t seed) {
    options.validate();
    AngularHistogram hist;
    hist.mass.assign(options.bins, 0.0);
    std::vector<std::size_t> counts(options.bins, 0);
    const double alpha = law.alpha();

    for (std::size_t c = 0; c < options.chains; ++c) {
        const std::size_t share = options.samples / options.chains + (c < options.samples % options.chains ? 1 : 0);
        RandomStream rng(derive_seed(seed, {c}));
        PlanarPoint z = random_unit(rng);
        for (std::size_t s = 0; s < options.burn_in; ++s) {
            z = step_homogeneous(z, StepMatrix{omega, alpha, law.sample(rng)});
            renormalise(z, s);
        }
        for (std::size_t s = 0; s < share; ++s) {
            z = step_homogeneous(z, StepMatrix{omega, alpha, law.sample(rng)});
            renormalise(z, options.burn_in + s);
            ++counts[hist.bin_of(direction_angle(z))];
        }
    }
    for (std::size_t i = 0; i < options.bins; ++i) {
        hist.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(options.samples);
    }
    hist.samples = options.samples;
    return hist;
}

AngularHistogram pushforward(const AngularHistogram& hist, double omega, const CoefficientLaw& law,
                             std::size_t samples, std::uint64_t seed) {
    if (hist.bins() == 0 || samples == 0) throw std::invalid_argument("pushforward of an empty histogram");
    std::vector<double> cdf(hist.bins());
    std::partial_sum(hist.mass.begin(), hist.mass.end(), cdf.begin());
    const double total = cdf.back();

    AngularHistogram out;
    out.mass.assign(hist.bins(), 0.0);
    std::vector<std::size_t> counts(hist.bins(), 0);
    RandomStream rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const double u = rng.uniform() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto bin = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
        const double angle = (static_cast<double>(bin) + rng.uniform()) * hist.bin_width();
        PlanarPoint z{std::sin(angle), std::cos(angle)};
        z = step_homogeneous(z, StepMatrix{omega, law.alpha(), law.sample(rng)});
        ++counts[out.bin_of(direction_angle(z))];
    }
    for (std::size_t i = 0; i < out.bins(); ++i) {
        out.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
    }
    out.samples = samples;
    return out;
}

double l1_distance(const AngularHistogram& a, const AngularHistogram& b) {
    if (a.bins() != b.bins()) throw std::invalid_argument("histograms have different bin counts");
    double d = 0.0;
    for (std::size_t i = 0; i < a.bins(); ++i) d += std::abs(a.mass[i] - b.mass[i]);
    return d;
}

double antipodal_asymmetry(const AngularHistogram& hist) {
    const std::size_t n = hist.bins();
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("antipodal comparison needs an even bin count");
    double d = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) d += std::abs(hist.mass[i] - hist.mass[i + n / 2]);
    return d;
}

double folded_mode(const AngularHistogram& hist) {
    const std::size_t n = hist.bins();
    if (n == 0 || n % 4 != 0) throw std::invalid_argument("folded mode needs a bin count divisible by 4");
    // Bins n/4 .. 3n/4 - 1 cover [pi/2, 3pi/2); fold in their antipodes.
    std::size_t best = n / 4;
    double best_mass = -1.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
        const double m = hist.mass[i] + hist.mass[(i + n / 2) % n];
        if (m > best_mass) {
            best_mass = m;
            best = i;
        }
    }
    return hist.bin_center(best);
}

void EscapeOptions::validate() const {
    if (!(r_in > 0.0 && r_in < 1.0 && r_out > 1.0 && std::isfinite(r_out))) {
        throw std::invalid_argument("escape radii must satisfy 0 < r_in < 1 < r_out");
    }
    if (max_steps == 0 || trials == 0) throw std::invalid_argument("escape needs max_steps > 0 and trials > 0");
}

EscapeStats escape_probability(double omega, const CoefficientLaw& law, const EscapeOptions& options,
                               std::uint64_t seed) {
    options.validate();
    const double in2 = options.r_in * options.r_in;
    const double out2 = options.r_out * options.r_out;
    const double alpha = law.alpha();
    std::size_t converged = 0;
    std::size_t escaped = 0;

    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        RandomStream rng(derive_seed(seed, {trial}));
        PlanarPoint z = random_unit(rng);
        for (std::size_t s = 0; s < options.max_steps; ++s) {
            z = step_homogeneous(z, StepMatrix{omega, alpha, law.sample(rng)});
            const double n2 = z.v * z.v + z.x * z.x;
            if (n2 <= in2) {
                ++converged;
                break;
            }
            if (!(n2 < out2)) {
                ++escaped;
                break;
            }
        }
    }

    const auto n = static_cast<double>(options.trials);
    EscapeStats stats;
    stats.p_converged = static_cast<double>(converged) / n;
    stats.p_escaped = static_cast<double>(escaped) / n;
    stats.p_undecided = static_cast<double>(options.trials - converged - escaped) / n;
    stats.trials = options.trials;
    stats.r_in = options.r_in;
    stats.r_out = options.r_out;
    stats.max_steps = options.max_steps;
    return stats;
}

std::string to_string(CriticalStatus status) {
    switch (status) {
        case CriticalStatus::Resolved: return "RESOLVED";
        case CriticalStatus::NoCrossing: return "NO_CROSSING";
        case CriticalStatus::Unresolved: return "UNRESOLVED";
    }
    return "UNRESOLVED";
}

std::string to_string(CurveMethod method) {
    switch (method) {
        case CurveMethod::LyapunovBisection: return "LYAPUNOV_BISECTION";
        case CurveMethod::EscapeEquality: return "ESCAPE_EQUALITY";
        case CurveMethod::NeutralEquality: return "NEUTRAL_EQUALITY";
    }
    return "LYAPUNOV_BISECTION";
}

namespace {

struct Probe {
    double alpha = 0.0;
    double stat = 0.0;  // negative on the stable side
    double std_error = 0.0;
    bool significant = false;
};

// Bisection for a sign change of a noisy statistic that is negative at small
// alpha and positive at large alpha. `measure(alpha, level)` evaluates the
// statistic with a budget that grows with level.
template <class Measure>
CriticalPoint bisect_sign_change(double omega, double tolerance, const BisectionOptions& options,
                                 Measure&& measure) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
    if (!(options.alpha_min > 0.0 && options.alpha_max > options.alpha_min)) {
        throw std::invalid_argument("bisection bracket must satisfy 0 < alpha_min < alpha_max");
    }

    auto evaluate = [&](double alpha) {
        Probe p;
        p.alpha = alpha;
        for (std::size_t level = 0; level <= options.max_escalations; ++level) {
            std::tie(p.stat, p.std_error) = measure(alpha, level);
            p.significant = std::abs(p.stat) > options.significance * p.std_error;
            if (p.significant) break;
        }
        return p;
    };

    CriticalPoint point;
    point.omega = omega;
    auto fail = [&](CriticalStatus status, const Probe& p) {
        point.status = status;
        point.statistic = p.stat;
        point.statistic_error = p.std_error;
        return point;
    };

    double lo = options.alpha_min;
    double hi = options.alpha_max;
    Probe at_lo = evaluate(lo);
    if (!at_lo.significant) return fail(CriticalStatus::Unresolved, at_lo);
    if (at_lo.stat > 0.0) return fail(CriticalStatus::NoCrossing, at_lo);
    Probe at_hi = evaluate(hi);
    if (!at_hi.significant) return fail(CriticalStatus::Unresolved, at_hi);
    if (at_hi.stat < 0.0) return fail(CriticalStatus::NoCrossing, at_hi);

    // Innermost significant probes on either side; their secant gives the
    // local slope used to convert the statistic's error into an alpha error.
    Probe sig_lo = at_lo;
    Probe sig_hi = at_hi;
    auto resolve = [&](double alpha, const Probe& p) {
        const double slope = (sig_hi.stat - sig_lo.stat) / (sig_hi.alpha - sig_lo.alpha);
        point.status = CriticalStatus::Resolved;
        point.alpha = alpha;
        point.statistic = p.stat;
        point.statistic_error = p.std_error;
        point.std_error = slope > 0.0 ? p.std_error / slope : std::numeric_limits<double>::infinity();
        return point;
    };

    // Stops once the bracket is within tolerance and the midpoint statistic is
    // indistinguishable from zero; halving continues past the tolerance while
    // it is not. Insignificant midpoints in a wide bracket still steer by sign.
    const double floor_width = 1e-9 * options.alpha_max;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        const Probe at_mid = evaluate(mid);
        const double width = hi - lo;
        if ((!at_mid.significant && width <= tolerance) || width <= floor_width) return resolve(mid, at_mid);
        if (at_mid.stat < 0.0) {
            lo = mid;
            if (at_mid.significant) sig_lo = at_mid;
        } else {
            hi = mid;
            if (at_mid.significant) sig_hi = at_mid;
        }
    }
}

std::uint64_t probe_seed(std::uint64_t seed, double alpha, std::size_t level) {
    return derive_seed(seed, {key_of(alpha), level});
}

}  // namespace

CriticalPoint critical_alpha(double omega, MixtureRatio ratio, double tolerance, std::uint64_t seed,
                             const BisectionOptions& options) {
    options.lyapunov.validate();
    return bisect_sign_change(omega, tolerance, options, [&](double alpha, std::size_t level) {
        const LyapunovEstimate e = lyapunov_exponent(omega, weight_for(ratio, alpha),
                                                     scaled(options.lyapunov, level),
                                                     probe_seed(seed, alpha, level));
        return std::pair{e.value, e.std_error};
    });
}

CriticalPoint escape_critical_alpha(double omega, MixtureRatio ratio, double tolerance, std::uint64_t seed,
                                    const BisectionOptions& options) {
    options.escape.validate();
    return bisect_sign_change(omega, tolerance, options, [&](double alpha, std::size_t level) {
        EscapeOptions opts = options.escape;
        opts.trials <<= level;
        const EscapeStats s =
            escape_probability(omega, weight_for(ratio, alpha), opts, probe_seed(seed, alpha, level));
        const double diff = s.p_escaped - s.p_converged;
        const double var = std::max(0.0, s.p_escaped + s.p_converged - diff * diff);
        const double se = std::sqrt(var / static_cast<double>(s.trials));
        return std::pair{diff, se};
    });
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("omega grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("omega grid has a non-finite value");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("omega grid must be strictly increasing");
    }
}

}  // namespace

CriticalCurve critical_curve(const std::vector<double>& omega_grid, MixtureRatio ratio, double tolerance,
                             std::uint64_t seed, const BisectionOptions& options, CurveMethod method) {
    check_grid(omega_grid);
    if (method == CurveMethod::NeutralEquality) {
        throw std::invalid_argument("use neutral_stability_curve for the neutral-equality method");
    }
    CriticalCurve curve;
    curve.ratio = ratio;
    curve.method = method;
    curve.points.resize(omega_grid.size());
    parallel_for(omega_grid.size(), options.jobs, [&](std::size_t i) {
        const double omega = omega_grid[i];
        const std::uint64_t s = derive_seed(seed, {key_of(omega)});
        curve.points[i] = method == CurveMethod::LyapunovBisection
                              ? critical_alpha(omega, ratio, tolerance, s, options)
                              : escape_critical_alpha(omega, ratio, tolerance, s, options);
    });
    return curve;
}

double finite_time_lyapunov(double omega, const MixtureWeight& weight, double z0_scale, double p, double g,
                            std::size_t steps, std::size_t repetitions, std::uint64_t seed) {
    if (steps == 0 || repetitions == 0) throw std::invalid_argument("finite_time_lyapunov needs steps, repetitions > 0");
    if (!std::isfinite(p) || !std::isfinite(g) || !(z0_scale > 0.0)) {
        throw std::invalid_argument("finite_time_lyapunov needs finite p, g and positive z0_scale");
    }
    const double a1 = weight.alpha1();
    const double a2 = weight.alpha2();
    double total = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        RandomStream rng(derive_seed(seed, {rep}));
        const double angle = kTwoPi * rng.uniform();
        double x = z0_scale * std::cos(angle);
        double v = z0_scale * std::sin(angle);
        for (std::size_t s = 0; s < steps; ++s) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            v = omega * v + a1 * r1 * (p - x) + a2 * r2 * (g - x);
            x = x + v;
            if (!std::isfinite(v) || !std::isfinite(x)) throw NumericError("finite-time orbit overflowed", s + 1);
        }
        total += std::hypot(x, v);
    }
    const double mean = total / static_cast<double>(repetitions);
    if (!std::isfinite(mean)) throw NumericError("finite-time mean norm overflowed", steps);
    return std::log(mean) / static_cast<double>(steps);
}

void ScalingConfig::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
    if (!std::isfinite(p) || !std::isfinite(g)) throw std::invalid_argument("p and g must be finite");
    if (iterations == 0 || repetitions == 0) throw std::invalid_argument("iterations and repetitions must be positive");
}

NeutralBalance neutral_balance(double omega, const MixtureWeight& weight, const ScalingConfig& config,
                               std::uint64_t seed) {
    config.validate();
    const double a1 = weight.alpha1();
    const double a2 = weight.alpha2();
    const double seg_lo = std::min(config.p, config.g);
    const double seg_hi = std::max(config.p, config.g);
    std::size_t converged = 0;

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        RandomStream rng(derive_seed(seed, {rep}));
        const double angle = kTwoPi * rng.uniform();
        double x = config.g + config.kappa * std::cos(angle);
        double v = config.kappa * std::sin(angle);
        for (std::size_t s = 0; s < config.iterations; ++s) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            v = omega * v + a1 * r1 * (config.p - x) + a2 * r2 * (config.g - x);
            x = x + v;
        }
        const double dx = x < seg_lo ? seg_lo - x : (x > seg_hi ? x - seg_hi : 0.0);
        const double dist = std::hypot(dx, v);
        if (dist < config.kappa) ++converged;  // NaN counts as diverged
    }

    const auto n = static_cast<double>(config.repetitions);
    NeutralBalance out;
    out.balance = (2.0 * static_cast<double>(converged) - n) / n;
    out.std_error = std::sqrt(std::max(0.0, 1.0 - out.balance * out.balance) / n);
    return out;
}

CriticalCurve neutral_stability_curve(const ScalingConfig& config, const std::vector<double>& omega_grid,
                                      double tolerance, std::uint64_t seed, MixtureRatio ratio,
                                      const BisectionOptions& options) {
    config.validate();
    check_grid(omega_grid);
    CriticalCurve curve;
    curve.ratio = ratio;
    curve.method = CurveMethod::NeutralEquality;
    curve.points.resize(omega_grid.size());
    parallel_for(omega_grid.size(), options.jobs, [&](std::size_t i) {
        const double omega = omega_grid[i];
        const std::uint64_t s = derive_seed(seed, {key_of(omega)});
        curve.points[i] = bisect_sign_change(omega, tolerance, options, [&](double alpha, std::size_t level) {
            ScalingConfig c = config;
            c.repetitions <<= level;
            const NeutralBalance b = neutral_balance(omega, weight_for(ratio, alpha), c, probe_seed(s, alpha, level));
            return std::pair{-b.balance, b.std_error};
        });
    });
    return curve;
}

}  // namespace swarmcrit

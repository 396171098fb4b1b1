#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "swarmcrit/errors.hpp"
#include "swarmcrit/stability.hpp"

using namespace swarmcrit;

namespace {

// Moduli of the eigenvalues of the mean matrix [[w, -a r], [w, 1 - a r]], larger first.
std::pair<double, double> eigen_moduli(double omega, double alpha, double r) {
    const double c = alpha * r;
    const double tr = omega + 1.0 - c;
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * omega, 0.0));
    const double m1 = std::abs((tr + disc) / 2.0);
    const double m2 = std::abs((tr - disc) / 2.0);
    return {std::max(m1, m2), std::min(m1, m2)};
}

const LyapunovBudget kDesk{10000, 16, 1000};

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

TEST_CASE("pinned coefficient reproduces the mean-matrix spectral radius") {
    for (auto [omega, alpha] : std::vector<std::pair<double, double>>{{0.7, 1.0}, {0.3, 3.0}, {-0.5, 2.0}, {0.9, 6.0}}) {
        const auto est = lyapunov_exponent(omega, CoefficientLaw::pinned(alpha, 0.5), kDesk, 1);
        CHECK(est.value == Catch::Approx(std::log(eigen_moduli(omega, alpha, 0.5).first)).margin(1e-3));
    }
}

TEST_CASE("lyapunov exponent signs on either side of the curve") {
    const LyapunovBudget budget{100000, 32, 1000};
    const auto inside = lyapunov_exponent(0.7, MixtureWeight::equal(0.5), budget, 1);
    CHECK(inside.value < -3.0 * inside.std_error);
    const auto outside = lyapunov_exponent(0.7, MixtureWeight::equal(4.8), budget, 1);
    CHECK(outside.value > 3.0 * outside.std_error);
    CHECK(outside.std_error >= 0.0);
    CHECK(outside.steps == budget.steps);
    CHECK(outside.trials == budget.trials);
}

TEST_CASE("lyapunov exponent is deterministic for a seed") {
    const auto a = lyapunov_exponent(0.4, MixtureWeight(0.3, 1.2), kDesk, 42);
    const auto b = lyapunov_exponent(0.4, MixtureWeight(0.3, 1.2), kDesk, 42);
    const auto c = lyapunov_exponent(0.4, MixtureWeight(0.3, 1.2), kDesk, 43);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.value != c.value);
}

TEST_CASE("lyapunov budget validation") {
    CHECK_THROWS_AS(lyapunov_exponent(0.5, MixtureWeight::equal(1.0), LyapunovBudget{0, 16, 10}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(lyapunov_exponent(0.5, MixtureWeight::equal(1.0), LyapunovBudget{100, 1, 10}, 1),
                    std::invalid_argument);
}

TEST_CASE("estimator is consistent under a doubled budget") {
    RandomStream rng(17);
    for (int i = 0; i < 10; ++i) {
        const double omega = -0.9 + 1.8 * rng.uniform();
        const double alpha = 0.2 + 5.0 * rng.uniform();
        const auto w = MixtureWeight::equal(alpha);
        const auto a = lyapunov_exponent(omega, w, kDesk, 100 + i);
        const auto b = lyapunov_exponent(omega, w, LyapunovBudget{20000, 32, 1000}, 200 + i);
        REQUIRE(std::abs(a.value - b.value) < 3.0 * combined(a.std_error, b.std_error));
    }
}

TEST_CASE("exponent pair sums to log |omega|") {
    RandomStream rng(23);
    for (int i = 0; i < 20; ++i) {
        const double mag = 0.1 + 0.85 * rng.uniform();
        const double omega = rng.uniform() < 0.5 ? -mag : mag;
        const auto w = MixtureWeight(2.0 * rng.uniform(), 0.05 + 3.0 * rng.uniform());
        const auto pair = lyapunov_pair(omega, w, kDesk, 300 + i);
        REQUIRE(pair.top.value >= pair.second.value);
        const double se = combined(pair.top.std_error, pair.second.std_error);
        REQUIRE(std::abs(pair.top.value + pair.second.value - std::log(std::abs(omega))) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("exponent pair with singular matrices") {
    const auto pair = lyapunov_pair(0.0, MixtureWeight::equal(2.0), kDesk, 1);
    CHECK(std::isinf(pair.second.value));
    CHECK(pair.second.value < 0.0);
    CHECK(pair.second.std_error == 0.0);
    CHECK(std::isfinite(pair.top.value));
}

TEST_CASE("exponent pair with pinned coefficient matches eigenvalue moduli") {
    const double omega = 0.1;
    const double alpha = 0.4;
    const auto pair = lyapunov_pair(omega, CoefficientLaw::pinned(alpha, 0.5), kDesk, 1);
    const auto [m1, m2] = eigen_moduli(omega, alpha, 0.5);
    CHECK(pair.top.value == Catch::Approx(std::log(m1)).margin(1e-3));
    CHECK(pair.second.value == Catch::Approx(std::log(m2)).margin(1e-3));
}

TEST_CASE("top exponent of the pair matches the single estimator") {
    const auto w = MixtureWeight::equal(3.0);
    const auto pair = lyapunov_pair(0.5, w, kDesk, 5);
    const auto single = lyapunov_exponent(0.5, w, kDesk, 6);
    CHECK(std::abs(pair.top.value - single.value) < 3.0 * combined(pair.top.std_error, single.std_error));
}

TEST_CASE("stationary histogram basics") {
    const StationaryOptions opts{128, 200000, 1000, 4};
    const auto h = stationary_distribution(0.7, MixtureWeight::social_only(2.5), opts, 9);
    REQUIRE(h.bins() == 128);
    double total = 0.0;
    for (double m : h.mass) {
        REQUIRE(m >= 0.0);
        total += m;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(h.samples == opts.samples);
    CHECK(h.bin_of(0.0) == 0);
    CHECK(h.bin_of(2.0 * std::numbers::pi - 1e-12) == 127);
    CHECK(h.bin_center(0) == Catch::Approx(h.bin_width() / 2.0));

    const auto again = stationary_distribution(0.7, MixtureWeight::social_only(2.5), opts, 9);
    CHECK(again.mass == h.mass);

    CHECK_THROWS_AS(stationary_distribution(0.7, MixtureWeight::equal(1.0), StationaryOptions{32, 1000, 10, 4}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(stationary_distribution(0.7, MixtureWeight::equal(1.0), StationaryOptions{64, 1000, 10, 1}, 1),
                    std::invalid_argument);
}

TEST_CASE("stationary histogram is a fixed point and antipodally symmetric") {
    const StationaryOptions opts{128, 1000000, 1000, 4};
    for (double alpha : {0.5, 2.5, 4.5}) {
        const auto w = MixtureWeight::social_only(alpha);
        const auto h = stationary_distribution(0.7, w, opts, 11);
        const auto pushed = pushforward(h, 0.7, w, opts.samples, 12);
        CHECK(l1_distance(h, pushed) < 0.05);
        CHECK(antipodal_asymmetry(h) < 0.05);
    }
}

TEST_CASE("stationary peak location and heights") {
    const StationaryOptions opts{128, 1000000, 1000, 4};
    const auto low = stationary_distribution(0.7, MixtureWeight::social_only(0.5), opts, 13);
    CHECK(std::abs(folded_mode(low) - std::numbers::pi) < 0.3);

    const auto mid = stationary_distribution(0.7, MixtureWeight::social_only(1.5), opts, 14);
    const auto high = stationary_distribution(0.7, MixtureWeight::social_only(4.5), opts, 15);
    CHECK(*std::max_element(high.mass.begin(), high.mass.end()) >=
          *std::max_element(mid.mass.begin(), mid.mass.end()));
}

TEST_CASE("folded mode on synthetic histograms") {
    AngularHistogram h;
    h.mass.assign(128, 0.0);
    h.mass[3] = 0.5;         // near 0
    h.mass[3 + 64] = 0.5;    // its antipode, near pi
    CHECK(std::abs(folded_mode(h) - h.bin_center(67)) < 1e-12);
    h.mass.assign(128, 0.0);
    h.mass[40] = 1.0;  // inside [pi/2, 3pi/2)
    CHECK(std::abs(folded_mode(h) - h.bin_center(40)) < 1e-12);
    h.mass.assign(126, 1.0 / 126);
    CHECK_THROWS_AS(folded_mode(h), std::invalid_argument);
}

TEST_CASE("l1 distance on synthetic histograms") {
    AngularHistogram a;
    AngularHistogram b;
    a.mass = {0.5, 0.5, 0.0, 0.0};
    b.mass = {0.0, 0.0, 0.5, 0.5};
    CHECK(l1_distance(a, b) == 2.0);
    CHECK(antipodal_asymmetry(a) == 1.0);
    CHECK(l1_distance(a, a) == 0.0);
}

TEST_CASE("escape probabilities deep inside and outside") {
    const EscapeOptions opts{1e-6, 1e6, 1000000, 2000};
    const auto in = escape_probability(0.3, MixtureWeight::equal(0.5), opts, 3);
    CHECK(in.p_converged > 0.99);
    CHECK(in.p_escaped < 0.01);
    const auto out = escape_probability(0.3, MixtureWeight::equal(6.0), opts, 3);
    CHECK(out.p_escaped > 0.99);
    for (const auto& s : {in, out}) {
        CHECK(std::abs(s.p_converged + s.p_escaped + s.p_undecided - 1.0) < 1e-12);
        CHECK(s.trials == opts.trials);
    }
    const auto again = escape_probability(0.3, MixtureWeight::equal(6.0), opts, 3);
    CHECK(again.p_escaped == out.p_escaped);
}

TEST_CASE("escape step cap leaves trials undecided") {
    const auto s = escape_probability(0.7, MixtureWeight::equal(4.77), EscapeOptions{1e-6, 1e6, 5, 100}, 1);
    CHECK(s.p_undecided == 1.0);
    CHECK_THROWS_AS(escape_probability(0.7, MixtureWeight::equal(1.0), EscapeOptions{2.0, 1e6, 10, 10}, 1),
                    std::invalid_argument);
}

TEST_CASE("lyapunov sign agrees with escape majority near the curve") {
    BisectionOptions b;
    for (double omega : {0.0, 0.4, 0.7}) {
        const auto root = critical_alpha(omega, MixtureRatio::Equal, 0.02, 1, b);
        REQUIRE(root.status == CriticalStatus::Resolved);
        for (double d : {-0.6, -0.3, 0.3, 0.6}) {
            const double alpha = *root.alpha + d;
            const auto w = MixtureWeight::equal(alpha);
            const auto lam = lyapunov_exponent(omega, w, kDesk, 7);
            const auto esc = escape_probability(omega, w, EscapeOptions{1e-6, 1e6, 1000000, 1000}, 7);
            REQUIRE((lam.value > 0.0) == (esc.p_escaped > esc.p_converged));
        }
    }
}

TEST_CASE("critical alpha behaviour along omega") {
    BisectionOptions b;
    const auto near_one = critical_alpha(0.95, MixtureRatio::Equal, 0.01, 2, b);
    REQUIRE(near_one.status == CriticalStatus::Resolved);
    CHECK(*near_one.alpha < 2.5);
    const auto near_zero = critical_alpha(0.0, MixtureRatio::Equal, 0.01, 2, b);
    REQUIRE(near_zero.status == CriticalStatus::Resolved);
    CHECK(*near_zero.alpha > 3.0);
    CHECK(*near_zero.alpha < 5.0);

    const auto equal = critical_alpha(0.7, MixtureRatio::Equal, 0.01, 3, b);
    const auto social = critical_alpha(0.7, MixtureRatio::SocialOnly, 0.01, 3, b);
    CHECK(*equal.alpha > *social.alpha);

    for (const auto& p : {near_one, near_zero, equal, social}) {
        CHECK(std::abs(p.statistic) <= b.significance * p.statistic_error);
        CHECK(p.std_error >= 0.0);
    }
}

TEST_CASE("critical alpha reports missing crossings") {
    BisectionOptions b;
    CHECK(critical_alpha(1.1, MixtureRatio::Equal, 0.01, 1, b).status == CriticalStatus::NoCrossing);
    CHECK_FALSE(critical_alpha(1.1, MixtureRatio::Equal, 0.01, 1, b).alpha.has_value());
    CHECK(critical_alpha(-1.1, MixtureRatio::Equal, 0.01, 1, b).status == CriticalStatus::NoCrossing);
    CHECK_THROWS_AS(critical_alpha(0.5, MixtureRatio::Equal, 0.0, 1, b), std::invalid_argument);
}

TEST_CASE("critical curve structure and inside-contour sign") {
    BisectionOptions b;
    b.lyapunov = LyapunovBudget{5000, 16, 500};
    const std::vector<double> grid{-1.1, -0.5, 0.0, 0.5, 0.9, 1.1};
    const auto curve = critical_curve(grid, MixtureRatio::SocialOnly, 0.02, 4, b);
    REQUIRE(curve.points.size() == grid.size());
    CHECK(curve.method == CurveMethod::LyapunovBisection);
    CHECK(curve.ratio == MixtureRatio::SocialOnly);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = curve.points[i];
        CHECK(p.omega == grid[i]);
        if (p.status != CriticalStatus::Resolved) continue;
        CHECK(*p.alpha > 0.0);
        const auto half = lyapunov_exponent(p.omega, MixtureWeight::social_only(*p.alpha / 2.0), kDesk, 8);
        CHECK(half.value < 0.0);
    }
    CHECK(curve.points.front().status == CriticalStatus::NoCrossing);
    CHECK(curve.points.back().status == CriticalStatus::NoCrossing);

    CHECK_THROWS_AS(critical_curve({0.5, 0.2}, MixtureRatio::Equal, 0.02, 1, b), std::invalid_argument);
}

TEST_CASE("critical curve does not depend on the job count") {
    BisectionOptions b;
    b.lyapunov = LyapunovBudget{3000, 10, 300};
    const std::vector<double> grid{-0.4, 0.1, 0.6};
    const auto serial = critical_curve(grid, MixtureRatio::Equal, 0.05, 9, b);
    b.jobs = 3;
    const auto parallel = critical_curve(grid, MixtureRatio::Equal, 0.05, 9, b);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(serial.points[i].alpha == parallel.points[i].alpha);
        CHECK(serial.points[i].std_error == parallel.points[i].std_error);
    }
}

TEST_CASE("ratio parsing") {
    CHECK(parse_ratio("equal") == MixtureRatio::Equal);
    CHECK(parse_ratio("social") == MixtureRatio::SocialOnly);
    CHECK(parse_ratio("social-only") == MixtureRatio::SocialOnly);
    CHECK_THROWS_AS(parse_ratio("cognitive"), std::invalid_argument);
    CHECK(weight_for(MixtureRatio::Equal, 2.0).alpha1() == 1.0);
    CHECK(weight_for(MixtureRatio::SocialOnly, 2.0).alpha1() == 0.0);
}

TEST_CASE("finite-time exponent shifts by log(kappa) / t") {
    const auto w = MixtureWeight::equal(3.0);
    const std::size_t t = 200;
    const double base = finite_time_lyapunov(0.6, w, 1.0, 0.1, 0.0, t, 500, 77);
    for (double kappa : {0.04, 0.1, 3.0}) {
        const double scaled = finite_time_lyapunov(0.6, w, kappa, 0.1 * kappa, 0.0, t, 500, 77);
        CHECK(std::abs(scaled - base - std::log(kappa) / static_cast<double>(t)) < 1e-9);
    }
}

TEST_CASE("finite-time exponent approaches the Lyapunov exponent without attractors") {
    // One repetition per seed: the log of a single norm is unbiased for lambda.
    const auto w = MixtureWeight::equal(2.0);
    const std::size_t t = 2000;
    const std::size_t seeds = 64;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const double v = finite_time_lyapunov(0.7, w, 1.0, 0.0, 0.0, t, 1, 1000 + s);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sum_sq / seeds - mean * mean) / (seeds - 1));
    const auto lam = lyapunov_exponent(0.7, w, LyapunovBudget{100000, 32, 1000}, 5);
    CHECK(std::abs(mean - lam.value) < 2.0 * combined(se, lam.std_error) + 1.0 / t);
}

TEST_CASE("finite-time exponent reports overflow with its step") {
    try {
        (void)finite_time_lyapunov(0.9, MixtureWeight::equal(8.0), 1.0, 0.0, 0.0, 100000, 1, 1);
        FAIL("expected a numeric error");
    } catch (const NumericError& e) {
        CHECK(e.step() > 0);
        CHECK(e.step() <= 100000);
    }
    CHECK_THROWS_AS(finite_time_lyapunov(0.5, MixtureWeight::equal(1.0), 0.0, 0.0, 0.0, 10, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("neutral balance limits") {
    ScalingConfig cfg;
    cfg.repetitions = 2000;
    const auto stable = neutral_balance(0.5, MixtureWeight::equal(1.0), cfg, 1);
    CHECK(stable.balance > 0.9);
    const auto unstable = neutral_balance(0.5, MixtureWeight::equal(7.0), cfg, 1);
    CHECK(unstable.balance < -0.9);
    CHECK(stable.std_error >= 0.0);
    ScalingConfig bad = cfg;
    bad.kappa = 0.0;
    CHECK_THROWS_AS(neutral_balance(0.5, MixtureWeight::equal(1.0), bad, 1), std::invalid_argument);
}

TEST_CASE("distinct attractors move the neutral contour inward") {
    BisectionOptions b;
    ScalingConfig cfg;
    cfg.repetitions = 10000;
    cfg.p = 0.0;
    const auto coincident = neutral_stability_curve(cfg, {0.5}, 0.02, 3, MixtureRatio::Equal, b);
    cfg.p = 0.1;
    const auto apart = neutral_stability_curve(cfg, {0.5}, 0.02, 3, MixtureRatio::Equal, b);
    REQUIRE(coincident.points[0].status == CriticalStatus::Resolved);
    REQUIRE(apart.points[0].status == CriticalStatus::Resolved);
    CHECK(*apart.points[0].alpha < *coincident.points[0].alpha);
    CHECK(apart.method == CurveMethod::NeutralEquality);

    // With coincident attractors the contour is the escape-equality one.
    const auto escape = escape_critical_alpha(0.5, MixtureRatio::Equal, 0.02, 3, b);
    REQUIRE(escape.status == CriticalStatus::Resolved);
    CHECK(std::abs(*coincident.points[0].alpha - *escape.alpha) < 0.15);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "swarmcrit/io.hpp"

using namespace swarmcrit;

TEST_CASE("reals use 17 significant digits and round trip") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_real(std::nan("")) == "nan");
    for (double v : {1.0 / 3.0, -2.5e-300, 6.02e23}) CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("curve csv round trip") {
    CriticalCurve c;
    c.ratio = MixtureRatio::SocialOnly;
    CriticalPoint a;
    a.omega = 0.1;
    a.alpha = 4.123456789;
    a.std_error = 0.01;
    a.status = CriticalStatus::Resolved;
    CriticalPoint b;
    b.omega = 1.1;
    b.status = CriticalStatus::NoCrossing;
    c.points = {a, b};
    std::ostringstream os;
    write_curve_csv(os, c, Metadata{}.add("seed", std::uint64_t{7}));
    const std::string text = os.str();
    CHECK(text.find("# tool: swarmcrit") == 0);
    CHECK(text.find("# seed: 7") != std::string::npos);
    CHECK(text.find("# ratio: social-only") != std::string::npos);
    CHECK(text.find("omega,alpha_critical,std_error,status\n") != std::string::npos);
    CHECK(text.find("1.1000000000000001,,,NO_CROSSING") != std::string::npos);

    std::istringstream is(text);
    const auto back = read_curve_csv(is);
    REQUIRE(back.points.size() == 2);
    CHECK(*back.points[0].alpha == a.alpha);
    CHECK(back.points[0].std_error == a.std_error);
    CHECK(back.points[1].status == CriticalStatus::NoCrossing);
    CHECK_FALSE(back.points[1].alpha.has_value());
}

TEST_CASE("sweep csv round trip") {
    SweepGrid g;
    g.cells = {{"rastrigin", -1.1, 0.25, 200, 12.5, 11.0, 0.05, 20},
               {"ackley/rotated", 0.3, 4.75, 200, std::numeric_limits<double>::infinity(), 3.0, 1.0, 20}};
    std::ostringstream os;
    write_sweep_csv(os, g, Metadata{});
    CHECK(os.str().find(
              "function,omega,alpha,iterations,mean_best_cost,median_best_cost,divergence_fraction,repetitions\n") !=
          std::string::npos);
    std::istringstream is(os.str());
    const auto back = read_sweep_csv(is);
    REQUIRE(back.cells.size() == 2);
    CHECK(back.cells[0].function == "rastrigin");
    CHECK(back.cells[0].omega == -1.1);
    CHECK(back.cells[1].mean_best_cost == std::numeric_limits<double>::infinity());
    CHECK(back.cells[1].repetitions == 20);

    std::istringstream bad("omega,alpha\n1,2\n");
    CHECK_THROWS_AS(read_sweep_csv(bad), std::invalid_argument);
}

TEST_CASE("histogram and aggregate csv headers") {
    AngularHistogram h;
    h.mass = {0.25, 0.25, 0.25, 0.25};
    std::ostringstream os;
    write_histogram_csv(os, h, Metadata{});
    CHECK(os.str().find("bin_center_rad,mass\n0.78539816339744828,0.25\n") != std::string::npos);

    std::ostringstream agg;
    write_aggregate_csv(agg, {{0.5, 1.0, 0.25}}, Metadata{});
    CHECK(agg.str().find("omega,alpha,normalized_cost\n0.5,1,0.25\n") != std::string::npos);
}

TEST_CASE("json records") {
    const auto j = to_json(LyapunovEstimate{0.5, 0.01, 100, 16, 10});
    CHECK(j["value"] == 0.5);
    CHECK(j["trials"] == 16);
    const auto e = to_json(EscapeStats{0.5, 0.25, 0.25, 100, 1e-6, 1e6, 1000});
    CHECK(e["p_undecided"] == 0.25);
    RunResult r;
    r.best_cost = 1.5;
    r.best_position = {1.0, 2.0};
    r.cost_trace = {2.0, 1.5};
    r.evaluations = 30;
    const auto rec = run_record(SwarmParams{}, 9, r);
    CHECK(rec["seed"] == 9);
    CHECK(rec["best_position"].size() == 2);
    CHECK(rec["params"]["omega"] == 0.7);
}

TEST_CASE("key value config parsing") {
    std::istringstream is(
        "# desk sweep\n"
        "functions = rastrigin, sphere  # two\n"
        "dim = 2\n\n"
        "iterations=200\n"
        "omega_min = 0\nomega_max = 0.5\nomega_step = 0.25\n"
        "split = social-only\n");
    const auto cfg = sweep_config_from(read_key_values(is));
    CHECK(cfg.functions == std::vector<std::string>{"rastrigin", "sphere"});
    CHECK(cfg.dim == 2);
    CHECK(cfg.iterations == 200);
    CHECK(cfg.omega_values == std::vector<double>{0.0, 0.25, 0.5});
    CHECK(cfg.split == MixtureRatio::SocialOnly);
    CHECK(cfg.alpha_values.size() == 20);

    std::istringstream unknown("colour = blue\n");
    CHECK_THROWS_AS(sweep_config_from(read_key_values(unknown)), std::invalid_argument);
    std::istringstream malformed("dim 2\n");
    CHECK_THROWS_AS(read_key_values(malformed), std::invalid_argument);
    std::istringstream negative("dim = -2\n");
    CHECK_THROWS_AS(sweep_config_from(read_key_values(negative)), std::invalid_argument);
}

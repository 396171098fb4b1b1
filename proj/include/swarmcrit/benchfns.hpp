#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace swarmcrit {

struct Interval {
    double lo = -100.0;
    double hi = 100.0;
};

enum class BaseFunction { Sphere, Rosenbrock, Rastrigin, Ackley, Griewank, Schwefel, Weierstrass };

std::string to_string(BaseFunction base);
/// Throws std::invalid_argument for an unknown name.
BaseFunction parse_base_function(std::string_view name);

/// A shifted, optionally rotated benchmark with minimum value 0 at `shift`.
///
/// Evaluation order: z = x - shift, z = Q z (if rotated), optional
/// non-continuous rounding of z, then the base formula.
struct BenchmarkFunction {
    std::string id;
    BaseFunction base = BaseFunction::Sphere;
    std::size_t dim = 0;
    Interval domain;
    std::vector<double> shift;
    std::optional<Eigen::MatrixXd> rotation;
    bool noncontinuous = false;
    std::uint64_t seed = 0;

    [[nodiscard]] const std::vector<double>& optimum_position() const noexcept { return shift; }
    [[nodiscard]] double optimum_value() const noexcept { return 0.0; }
    [[nodiscard]] bool rotated() const noexcept { return rotation.has_value(); }

    double operator()(std::span<const double> x) const;
};

/// Throws std::invalid_argument if x.size() != f.dim.
double evaluate(const BenchmarkFunction& f, std::span<const double> x);

/// Seeded instance: shift uniform in 0.8 x domain, rotation from a
/// Gaussian matrix by QR with a sign-fixed diagonal.
BenchmarkFunction make_function(std::string_view id, std::size_t dim, std::uint64_t seed,
                                bool rotated = false, bool noncontinuous = false);

/// The fixed-order representative suite: every base function plain and
/// rotated, plus the non-continuous rotated Rastrigin.
std::vector<BenchmarkFunction> suite(std::size_t dim, std::uint64_t seed);

/// Looks up a suite member by id (e.g. "rastrigin", "rastrigin/rotated",
/// "rastrigin/noncontinuous-rotated").
BenchmarkFunction suite_member(std::string_view id, std::size_t dim, std::uint64_t seed);

/// Base formulas on already-transformed coordinates; exposed for tests.
namespace formulas {
double sphere(std::span<const double> z);
double rosenbrock(std::span<const double> z);
double rastrigin(std::span<const double> z);
double ackley(std::span<const double> z);
double griewank(std::span<const double> z);
double schwefel(std::span<const double> z);
double weierstrass(std::span<const double> z);
/// y = z if |z| <= 0.5, else round(2z)/2.
double noncontinuous(double z);
}  // namespace formulas

}  // namespace swarmcrit

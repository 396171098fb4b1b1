#include "swarmcrit/benchfns.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

#include "swarmcrit/random.hpp"

namespace swarmcrit {

namespace {

constexpr std::array<BaseFunction, 7> kBases = {
    BaseFunction::Sphere,   BaseFunction::Rosenbrock, BaseFunction::Rastrigin,  BaseFunction::Ackley,
    BaseFunction::Griewank, BaseFunction::Schwefel,   BaseFunction::Weierstrass,
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Weierstrass constants a = 0.5, b = 3, k = 0..20.
struct WeierstrassTable {
    std::array<double, 21> a_pow{};
    std::array<double, 21> b_pow{};
    WeierstrassTable() {
        double a = 1.0;
        double b = 1.0;
        for (std::size_t k = 0; k < a_pow.size(); ++k) {
            a_pow[k] = a;
            b_pow[k] = b;
            a *= 0.5;
            b *= 3.0;
        }
    }
};

const WeierstrassTable& weierstrass_table() {
    static const WeierstrassTable table;
    return table;
}

double apply_base(BaseFunction base, std::span<const double> z) {
    switch (base) {
        case BaseFunction::Sphere: return formulas::sphere(z);
        case BaseFunction::Rosenbrock: return formulas::rosenbrock(z);
        case BaseFunction::Rastrigin: return formulas::rastrigin(z);
        case BaseFunction::Ackley: return formulas::ackley(z);
        case BaseFunction::Griewank: return formulas::griewank(z);
        case BaseFunction::Schwefel: return formulas::schwefel(z);
        case BaseFunction::Weierstrass: return formulas::weierstrass(z);
    }
    throw std::logic_error("unhandled base function");
}

}  // namespace

namespace formulas {

double sphere(std::span<const double> z) {
    double s = 0.0;
    for (double c : z) s += c * c;
    return s;
}

// Optimum moved from (1, ..., 1) to the origin.
double rosenbrock(std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double y = z[i] + 1.0;
        const double y_next = z[i + 1] + 1.0;
        s += 100.0 * (y_next - y * y) * (y_next - y * y) + (y - 1.0) * (y - 1.0);
    }
    return s;
}

double rastrigin(std::span<const double> z) {
    double s = 0.0;
    // 10 (1 - cos(2 pi c)) written as 20 sin^2(pi c) to avoid cancellation.
    for (double c : z) {
        const double sn = std::sin(std::numbers::pi * c);
        s += c * c + 20.0 * sn * sn;
    }
    return s;
}

double ackley(std::span<const double> z) {
    if (z.empty()) return 0.0;
    double sq = 0.0;
    double one_minus_cos = 0.0;  // sum of 1 - cos(2 pi c) = 2 sin^2(pi c)
    for (double c : z) {
        sq += c * c;
        const double sn = std::sin(std::numbers::pi * c);
        one_minus_cos += 2.0 * sn * sn;
    }
    const auto n = static_cast<double>(z.size());
    // Both terms are written with expm1 so that they vanish smoothly at the optimum.
    return -20.0 * std::expm1(-0.2 * std::sqrt(sq / n)) - std::numbers::e * std::expm1(-one_minus_cos / n);
}

double griewank(std::span<const double> z) {
    double sq = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sq += z[i] * z[i];
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sq / 4000.0 + (1.0 - prod);
}

// Schwefel's problem 1.2: sum of squared prefix sums.
double schwefel(std::span<const double> z) {
    double s = 0.0;
    double prefix = 0.0;
    for (double c : z) {
        prefix += c;
        s += prefix * prefix;
    }
    return s;
}

// b^k is odd, so cos(pi * b^k) = -1 and each term is a^k (cos(...) + 1) >= 0.
double weierstrass(std::span<const double> z) {
    const auto& t = weierstrass_table();
    double s = 0.0;
    for (double c : z) {
        for (std::size_t k = 0; k < t.a_pow.size(); ++k) {
            s += t.a_pow[k] * (std::cos(kTwoPi * t.b_pow[k] * (c + 0.5)) + 1.0);
        }
    }
    return s;
}

double noncontinuous(double z) {
    return std::abs(z) <= 0.5 ? z : std::round(2.0 * z) / 2.0;
}

}  // namespace formulas

std::string to_string(BaseFunction base) {
    switch (base) {
        case BaseFunction::Sphere: return "sphere";
        case BaseFunction::Rosenbrock: return "rosenbrock";
        case BaseFunction::Rastrigin: return "rastrigin";
        case BaseFunction::Ackley: return "ackley";
        case BaseFunction::Griewank: return "griewank";
        case BaseFunction::Schwefel: return "schwefel";
        case BaseFunction::Weierstrass: return "weierstrass";
    }
    return "unknown";
}

BaseFunction parse_base_function(std::string_view name) {
    for (BaseFunction b : kBases) {
        if (to_string(b) == name) return b;
    }
    throw std::invalid_argument("unknown benchmark function '" + std::string(name) + "'");
}

double BenchmarkFunction::operator()(std::span<const double> x) const { return evaluate(*this, x); }

double evaluate(const BenchmarkFunction& f, std::span<const double> x) {
    if (x.size() != f.dim) {
        throw std::invalid_argument("benchmark '" + f.id + "' expects dimension " + std::to_string(f.dim) +
                                    ", got " + std::to_string(x.size()));
    }
    thread_local std::vector<double> z;
    z.resize(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) z[i] = x[i] - f.shift[i];
    if (f.rotation) {
        thread_local std::vector<double> rotated;
        rotated.resize(f.dim);
        Eigen::Map<Eigen::VectorXd>(rotated.data(), static_cast<Eigen::Index>(f.dim)) =
            *f.rotation * Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(f.dim));
        z.swap(rotated);
    }
    if (f.noncontinuous) {
        for (double& c : z) c = formulas::noncontinuous(c);
    }
    return apply_base(f.base, z);
}

BenchmarkFunction make_function(std::string_view id, std::size_t dim, std::uint64_t seed, bool rotated,
                                bool noncontinuous) {
    if (dim == 0) throw std::invalid_argument("benchmark dimension must be positive");
    BenchmarkFunction f;
    f.base = parse_base_function(id);
    f.dim = dim;
    f.seed = seed;
    f.noncontinuous = noncontinuous;
    f.id = to_string(f.base);
    if (noncontinuous && rotated) {
        f.id += "/noncontinuous-rotated";
    } else if (noncontinuous) {
        f.id += "/noncontinuous";
    } else if (rotated) {
        f.id += "/rotated";
    }

    // Shift and rotation depend on (base, dim, seed) only, so variants of the
    // same base share their optimum.
    const auto base_key = static_cast<std::uint64_t>(f.base);
    RandomStream shift_rng(derive_seed(seed, {base_key, dim, 1}));
    const double lo = 0.8 * f.domain.lo;
    const double hi = 0.8 * f.domain.hi;
    f.shift.resize(dim);
    for (double& s : f.shift) s = lo + (hi - lo) * shift_rng.uniform();

    if (rotated) {
        RandomStream rot_rng(derive_seed(seed, {base_key, dim, 2}));
        const auto n = static_cast<Eigen::Index>(dim);
        Eigen::MatrixXd gaussian(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index r = 0; r < n; ++r) gaussian(r, c) = rot_rng.normal();
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
        Eigen::MatrixXd q = qr.householderQ();
        const Eigen::MatrixXd& packed = qr.matrixQR();
        for (Eigen::Index c = 0; c < n; ++c) {
            if (packed(c, c) < 0.0) q.col(c) *= -1.0;
        }
        f.rotation = std::move(q);
    }
    return f;
}

std::vector<BenchmarkFunction> suite(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw std::invalid_argument("suite dimension must be positive");
    std::vector<BenchmarkFunction> out;
    out.reserve(2 * kBases.size() + 1);
    for (BaseFunction b : kBases) out.push_back(make_function(to_string(b), dim, seed, false, false));
    for (BaseFunction b : kBases) out.push_back(make_function(to_string(b), dim, seed, true, false));
    out.push_back(make_function("rastrigin", dim, seed, true, true));
    return out;
}

BenchmarkFunction suite_member(std::string_view id, std::size_t dim, std::uint64_t seed) {
    const auto slash = id.find('/');
    const std::string_view base = id.substr(0, slash);
    const std::string_view variant = slash == std::string_view::npos ? std::string_view{} : id.substr(slash + 1);
    if (variant.empty()) return make_function(base, dim, seed, false, false);
    if (variant == "rotated") return make_function(base, dim, seed, true, false);
    if (variant == "noncontinuous-rotated") return make_function(base, dim, seed, true, true);
    if (variant == "noncontinuous") return make_function(base, dim, seed, false, true);
    throw std::invalid_argument("unknown benchmark variant '" + std::string(variant) + "'");
}

}  // namespace swarmcrit

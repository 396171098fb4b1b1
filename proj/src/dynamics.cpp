#include "swarmcrit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmcrit {

void SwarmParams::validate() const {
    if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2)) {
        throw std::invalid_argument("attraction weights must be finite and non-negative");
    }
    if (!(alpha() > 0.0)) throw std::invalid_argument("alpha1 + alpha2 must be positive");
    if (n_particles == 0) throw std::invalid_argument("swarm needs at least one particle");
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
}

PhasePoint PhasePoint::zero(std::size_t dim) {
    return PhasePoint{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
}

bool PhasePoint::finite() const noexcept {
    auto ok = [](double c) { return std::isfinite(c); };
    return std::all_of(v.begin(), v.end(), ok) && std::all_of(x.begin(), x.end(), ok);
}

double PlanarPoint::norm() const noexcept { return std::hypot(v, x); }

bool PlanarPoint::finite() const noexcept { return std::isfinite(v) && std::isfinite(x); }

MixtureWeight::MixtureWeight(double alpha1, double alpha2) : alpha1_(alpha1), alpha2_(alpha2) {
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2)) {
        throw std::invalid_argument("mixture weights must be finite and non-negative");
    }
    if (!(alpha1 + alpha2 > 0.0)) throw std::invalid_argument("alpha1 + alpha2 must be positive");
}

double MixtureWeight::variance() const noexcept {
    const double a = alpha();
    return (alpha1_ * alpha1_ + alpha2_ * alpha2_) / (12.0 * a * a);
}

double mixture_pdf(double r, const MixtureWeight& w) {
    if (!(r >= 0.0 && r <= 1.0)) return 0.0;
    if (w.degenerate()) return 1.0;

    const double a = w.alpha1() / w.alpha();
    const double b = w.alpha2() / w.alpha();
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (r <= lo) return r / (a * b);
    if (r <= hi) return 1.0 / hi;
    return (1.0 - r) / (a * b);
}

double sample_mixture(RandomStream& rng, const MixtureWeight& w) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    if (w.alpha1() == 0.0) return u2;
    if (w.alpha2() == 0.0) return u1;
    return (w.alpha1() * u1 + w.alpha2() * u2) / w.alpha();
}

std::array<std::array<double, 2>, 2> StepMatrix::entries() const noexcept {
    const double ar = alpha_r();
    return {{{omega, -ar}, {omega, 1.0 - ar}}};
}

double StepMatrix::determinant() const noexcept {
    const auto m = entries();
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

StepMatrix build_step_matrix(double omega, double alpha, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("mixture weight r must lie in [0, 1]");
    return StepMatrix{omega, alpha, r};
}

PlanarPoint step_homogeneous(const PlanarPoint& z, const StepMatrix& m) {
    const double v = m.omega * z.v - m.alpha_r() * z.x;
    return PlanarPoint{v, z.x + v};
}

PhasePoint step_affine(const PhasePoint& z, const SwarmParams& params,
                       std::span<const double> r1, std::span<const double> r2,
                       std::span<const double> p, std::span<const double> g) {
    const std::size_t d = z.dim();
    if (z.v.size() != d || r1.size() != d || r2.size() != d || p.size() != d || g.size() != d) {
        throw std::invalid_argument("step_affine: dimension mismatch");
    }
    PhasePoint next = PhasePoint::zero(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double x = z.x[j];
        const double v = params.omega * z.v[j] + params.alpha1 * r1[j] * (p[j] - x) +
                         params.alpha2 * r2[j] * (g[j] - x);
        next.v[j] = v;
        next.x[j] = x + v;
    }
    return next;
}

std::string RegimeLabel::to_string() const {
    std::string out = stability == Stability::Convergent ? "CONVERGENT" : "DIVERGENT";
    if (harmonic) out += "+HARMONIC";
    if (zigzag) out += "+ZIGZAG";
    if (complex_eigenvalues) out += "+COMPLEX";
    return out;
}

RegimeLabel deterministic_regime(double omega, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("deterministic_regime requires alpha > 0");
    const double w = omega;
    const double a = alpha;

    RegimeLabel label;
    const bool convergent = w < 1.0 && 2.0 * w - a + 2.0 > 0.0;
    label.stability = convergent ? Stability::Convergent : Stability::Divergent;
    label.harmonic = w * w + a * a - 2.0 * w * a - 2.0 * w - 2.0 * a + 1.0 < 0.0;
    label.zigzag = w < 0.0 && w - a + 1.0 < 0.0;
    label.complex_eigenvalues = w * w + a * a / 4.0 - w * a - 2.0 * w - a + 1.0 < 0.0;
    return label;
}

}  // namespace swarmcrit

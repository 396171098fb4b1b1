#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swarmcrit/random.hpp"

namespace swarmcrit {

/// Parameters of the standard PSO update: inertia, the two attraction
/// weights, swarm size and search-space dimension.
struct SwarmParams {
    double omega = 0.7;
    double alpha1 = 0.7;
    double alpha2 = 0.7;
    std::size_t n_particles = 25;
    std::size_t dim = 10;

    [[nodiscard]] double alpha() const noexcept { return alpha1 + alpha2; }
    /// Throws std::invalid_argument on negative weights, zero total weight,
    /// non-finite omega or empty swarm/dimension.
    void validate() const;
};

/// State z = (v, x) of one particle.
struct PhasePoint {
    std::vector<double> v;
    std::vector<double> x;

    static PhasePoint zero(std::size_t dim);
    [[nodiscard]] std::size_t dim() const noexcept { return x.size(); }
    [[nodiscard]] bool finite() const noexcept;
};

/// Planar state of a one-dimensional particle; the hot-loop form of PhasePoint.
struct PlanarPoint {
    double v = 0.0;
    double x = 0.0;

    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] bool finite() const noexcept;
};

/// Law of the combined attraction coefficient r = (a1*U1 + a2*U2) / (a1 + a2).
class MixtureWeight {
public:
    MixtureWeight(double alpha1, double alpha2);

    static MixtureWeight equal(double alpha) { return {alpha / 2.0, alpha / 2.0}; }
    static MixtureWeight social_only(double alpha) { return {0.0, alpha}; }

    [[nodiscard]] double alpha1() const noexcept { return alpha1_; }
    [[nodiscard]] double alpha2() const noexcept { return alpha2_; }
    [[nodiscard]] double alpha() const noexcept { return alpha1_ + alpha2_; }
    /// One of the weights is zero, so r is a single uniform variable.
    [[nodiscard]] bool degenerate() const noexcept { return alpha1_ == 0.0 || alpha2_ == 0.0; }
    [[nodiscard]] double mean() const noexcept { return 0.5; }
    [[nodiscard]] double variance() const noexcept;

private:
    double alpha1_;
    double alpha2_;
};

/// Density of the mixture weight. Piecewise linear on [0, 1], zero elsewhere.
double mixture_pdf(double r, const MixtureWeight& w);

/// Draws r exactly by its construction from two uniforms. The degenerate
/// case returns the surviving uniform unchanged.
double sample_mixture(RandomStream& rng, const MixtureWeight& w);

/// One realisation of the one-dimensional dynamics matrix
///     [[omega, -alpha*r], [omega, 1 - alpha*r]]
/// acting on (v, x).
struct StepMatrix {
    double omega = 0.0;
    double alpha = 0.0;
    double r = 0.0;

    [[nodiscard]] double alpha_r() const noexcept { return alpha * r; }
    [[nodiscard]] std::array<std::array<double, 2>, 2> entries() const noexcept;
    [[nodiscard]] double determinant() const noexcept;
};

/// Throws std::invalid_argument unless r lies in [0, 1].
StepMatrix build_step_matrix(double omega, double alpha, double r);

/// z' = M z, evaluated as v' = omega*v - (alpha*r)*x, x' = x + v'. The caller
/// checks finite() on the result.
PlanarPoint step_homogeneous(const PlanarPoint& z, const StepMatrix& m);

/// Full PSO update with fixed attractors:
///     v' = omega*v + alpha1*R1*(p - x) + alpha2*R2*(g - x),  x' = x + v'
/// r1 and r2 are the diagonals of R1 and R2. A non-finite result is returned
/// as-is and reported by PhasePoint::finite().
PhasePoint step_affine(const PhasePoint& z, const SwarmParams& params,
                       std::span<const double> r1, std::span<const double> r2,
                       std::span<const double> p, std::span<const double> g);

/// Stability class of the deterministic (mean-coefficient) theory.
enum class Stability { Convergent, Divergent };

/// Regime of the deterministic one-particle system. Harmonic and zigzag are
/// sub-labels that may accompany either stability class.
struct RegimeLabel {
    Stability stability = Stability::Divergent;
    bool harmonic = false;
    bool zigzag = false;
    bool complex_eigenvalues = false;

    [[nodiscard]] std::string to_string() const;
};

/// Classic conditions for the deterministic PSO (random factors replaced by
/// their means). Throws std::invalid_argument for alpha <= 0.
RegimeLabel deterministic_regime(double omega, double alpha);

}  // namespace swarmcrit

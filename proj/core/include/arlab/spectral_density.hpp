#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "arlab/kernel.hpp"

namespace arlab {

/// Order parameter Z = \int e^{i theta} p(theta) dtheta.
struct OrderParameter {
    std::complex<double> Z;

    double modulus() const { return std::abs(Z); }
    double phase() const { return std::arg(Z); }
};

/// Probability density on the circle truncated to Fourier modes |k| <= N:
/// p(theta) = sum_k c_k e^{i k theta}, c_{-k} = conj(c_k). Only c_0..c_N are
/// stored; c_0 is held at 1/(2 pi).
class SpectralDensity {
public:
    explicit SpectralDensity(int n_modes);  // uniform density
    SpectralDensity(std::vector<std::complex<double>> coeffs, double time = 0.0);

    static SpectralDensity from_stationary(const StationaryDensity& sd, int n_modes, double psi = 0.0);
    /// Projection of a sampled density (renormalised to unit mass).
    static SpectralDensity from_function(const std::function<double(double)>& density, int n_modes,
                                         int samples = 0);

    int n_modes() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
    std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
    /// c_k for any integer k (zero beyond the truncation).
    std::complex<double> coeff(int k) const noexcept;

    double time() const noexcept { return time_; }
    void set_time(double t) noexcept { time_ = t; }

    /// Reset c_0 = 1/(2 pi) and force it real.
    void pin_mass() noexcept;

    OrderParameter order_parameter() const noexcept;
    double operator()(double theta) const noexcept;
    std::vector<double> sample(int points) const;
    double min_value(int points = 512) const;

    /// |c_N| / |c_1|; the resolution alarm fires above 1e-6.
    double tail_ratio() const noexcept;
    bool resolved(double threshold = 1e-6) const noexcept { return tail_ratio() < threshold; }

    SpectralDensity resized(int n_modes) const;

    /// this + s * (zero-mean perturbation given by its modes c_1..c_M)
    SpectralDensity perturbed(std::span<const std::complex<double>> modes, double s) const;

private:
    std::vector<std::complex<double>> coeffs_;
    double time_ = 0.0;
};

/// L2 norm of p - q over the circle.
double l2_distance(const SpectralDensity& p, const SpectralDensity& q);
/// H1 norm (sum (1 + k^2) |c_k|^2 weighting) of p - q.
double h1_distance(const SpectralDensity& p, const SpectralDensity& q);
/// Unweighted H_{-1} norm of a zero-mean coefficient vector c_1..c_N.
double hminus1_norm(std::span<const std::complex<double>> modes);

/// arg Z. Throws DomainError when |Z| < 1e-8 (incoherent state).
double measure_phase(const SpectralDensity& state);

/// Continuous unwrapping of measure_phase along a trajectory.
class PhaseTracker {
public:
    double update(const SpectralDensity& state);
    double update(double raw_phase);
    bool started() const noexcept { return started_; }
    double value() const noexcept { return unwrapped_; }

private:
    bool started_ = false;
    double unwrapped_ = 0.0;
};

/// F(psi) = (p - q_psi, q'_psi)_{-1,1/q_psi} through the Fourier form of the
/// closed-form pairing.
double isochronal_defect(const SpectralDensity& state, const StationaryDensity& sd, double psi);

/// The phase psi* in a +-pi/4 window around arg Z with (p - q_psi*, q'_psi*) = 0,
/// i.e. the point of the manifold reached along the stable fibre. The result
/// is returned on the same branch as arg Z (or as `near` when given). Throws
/// NumericError if no sign change is found in the window.
double isochronal_projection(const SpectralDensity& state, const StationaryDensity& sd);
double isochronal_projection(const SpectralDensity& state, const StationaryDensity& sd, double near);

}  // namespace arlab

#pragma once

#include <complex>
#include <string>

#include "arlab/bessel.hpp"

namespace arlab {

/// Stationary profile q_psi(theta) = exp(x cos(theta - psi)) / (2 pi I_0(x)),
/// x = 2 K r / sigma^2, of the reversible Kuramoto equation, together with the
/// order parameter r that solves r = Psi(x).
///
/// K is the physical coupling; all formulas use the rescaled coupling
/// K / sigma^2 so that sigma = 1 reproduces the standard normalisation.
/// For K / sigma^2 <= 1 only the incoherent branch exists: r = 0 and q is the
/// uniform density.
class StationaryDensity {
public:
    StationaryDensity(double K, double sigma, double r, BesselTable bessel);

    double K() const noexcept { return K_; }
    double sigma() const noexcept { return sigma_; }
    double coupling() const noexcept { return K_ / (sigma_ * sigma_); }
    double r() const noexcept { return r_; }
    /// Argument 2 K r / sigma^2 of the Bessel table.
    double x() const noexcept { return bessel_.x(); }
    const BesselTable& bessel() const noexcept { return bessel_; }
    bool synchronized() const noexcept { return r_ > 0.0; }

    /// Mean 1/(2 pi) for j = 0, cosine amplitude I_j / (pi I_0) for j >= 1.
    double cosine_coefficient(int j) const;
    /// Coefficient of e^{i k theta} in q_0 (real, even in k).
    double fourier_coefficient(int k) const;

    double density(double theta, double psi = 0.0) const;
    /// d/dtheta q_psi(theta)
    double density_derivative(double theta, double psi = 0.0) const;

    /// D(K) = I_0^2 / (I_0^2 - 1). Throws DomainError on the incoherent branch.
    double drift_factor() const;
    /// D(K) I_k / I_0: ratio of the k-th harmonic of the effective force to
    /// that of the potential.
    double amplification(int k) const;
    /// a_{c,j}(K) = (I_0^2 - 1) / (I_0 I_j).
    double critical_amplitude(int j) const;

    /// Same state with a Bessel table reaching order k_max.
    StationaryDensity extended(int k_max) const;

    /// Plain-text cache record: one '#' header line, then
    /// K,sigma,r,I_0,...,I_kmax on a single comma-separated line.
    std::string to_record() const;
    static StationaryDensity from_record(const std::string& text);

private:
    void require_synchronized(const char* what) const;

    double K_;
    double sigma_;
    double r_;
    BesselTable bessel_;
};

/// Solve r = Psi(2 K r / sigma^2) on (0, 1) by bracketed Newton iteration.
/// Returns r = 0 when K / sigma^2 <= 1. Throws NumericError (carrying the
/// last residual) if the iteration budget is exhausted.
StationaryDensity solve_order_parameter(double K, double tol = 1e-13, double sigma = 1.0,
                                        int k_max = BesselTable::kDefaultKMax);

}  // namespace arlab

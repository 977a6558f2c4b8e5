#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "arlab/kernel.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

/// Real function on the circle R / 2 pi Z held by its values on a uniform grid
/// theta_m = 2 pi m / n. Evaluation between nodes is trigonometric
/// interpolation, so sampled trigonometric polynomials of degree < n/2 are
/// represented exactly.
class CircleFunction {
public:
    explicit CircleFunction(std::vector<double> samples);

    static CircleFunction sample(const std::function<double(double)>& fn, int n);
    static CircleFunction sample(const TrigPolynomial& p, int n);

    int size() const noexcept { return static_cast<int>(samples_.size()); }
    double spacing() const noexcept;
    double node(int m) const noexcept;
    std::span<const double> samples() const noexcept { return samples_; }

    /// Integral over the circle (trapezoid rule, spectrally accurate).
    double integral() const noexcept;
    /// |integral| <= tol * (1 + max |u|)
    bool zero_mean(double tol = 1e-10) const noexcept;
    bool strictly_positive() const noexcept;

    double operator()(double theta) const;

    /// Zero-mean primitive U with U' = u. Requires zero_mean().
    CircleFunction primitive() const;

    CircleFunction operator*(const CircleFunction& other) const;
    CircleFunction operator-(const CircleFunction& other) const;

private:
    std::vector<double> samples_;
    std::vector<std::complex<double>> modes_;  // c_k for k = 0..n/2
};

/// (u, v)_{-1,w} = \int w U V, with U, V the primitives of u, v centred so
/// that \int w U = \int w V = 0. Throws ContractError unless u, v are
/// zero-mean and DomainError unless w > 0.
double weighted_hminus1_inner(const CircleFunction& u, const CircleFunction& v,
                              const CircleFunction& w);

double weighted_hminus1_norm(const CircleFunction& u, const CircleFunction& w);

/// (v, q'_psi)_{-1,1/q_psi} from the one-dimensional closed form
///   \int V - 2 pi (\int V / q_psi) / (\int 1 / q_0),  V(theta) = \int_0^theta v,
/// which needs no weighted centring.
double tangent_pairing(const CircleFunction& v, const StationaryDensity& sd, double psi);

/// (e^{i k theta}, q'_psi)_{-1,1/q_psi} for k != 0, from the Fourier form of
/// the same closed form: -(2 pi / (i k)) (-1)^k (I_k/I_0) e^{i k psi}.
std::complex<double> tangent_pairing_mode(int k, const StationaryDensity& sd, double psi);

/// (q', q')_{-1,1/q}, independent of psi.
double tangent_norm_squared(const StationaryDensity& sd);

}  // namespace arlab

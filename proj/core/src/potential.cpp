#include "arlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_manifold(const StationaryDensity& sd, const char* what) {
    if (!sd.synchronized()) {
        throw DomainError(std::string(what) + ": K = " + std::to_string(sd.K()) +
                          " has no synchronized manifold (need K/sigma^2 > 1)");
    }
}

}  // namespace

EffectiveForce effective_force_coeff(const TrigPolynomial& v_prime, const StationaryDensity& sd) {
    require_manifold(sd, "effective_force_coeff");
    const StationaryDensity table = sd.extended(v_prime.degree());
    TrigPolynomial f = TrigPolynomial::constant(v_prime.a0());
    for (int k = 1; k <= v_prime.degree(); ++k) {
        const double gain = table.amplification(k);
        f.set(k, gain * v_prime.a(k), gain * v_prime.b(k));
    }
    return {std::move(f), v_prime, sd.K(), ForceRoute::coefficient_map};
}

EffectiveForce effective_force_conv(const TrigPolynomial& v_prime, const StationaryDensity& sd) {
    require_manifold(sd, "effective_force_conv");
    const int n = v_prime.degree();
    const int nodes = 4 * std::max(n, sd.bessel().k_max());
    const double h = kTwoPi / nodes;

    std::vector<double> kernel(static_cast<std::size_t>(nodes));
    std::vector<double> centred(static_cast<std::size_t>(nodes));
    for (int m = 0; m < nodes; ++m) {
        kernel[static_cast<std::size_t>(m)] = sd.density(m * h);
        centred[static_cast<std::size_t>(m)] = v_prime(m * h) - v_prime.a0();
    }
    // (q0 * g)(psi_l) = \int q0(psi_l - t) g(t) dt
    const double gain = sd.drift_factor();
    std::vector<double> smeared(static_cast<std::size_t>(nodes));
    for (int l = 0; l < nodes; ++l) {
        double sum = 0.0;
        for (int m = 0; m < nodes; ++m) {
            sum += kernel[static_cast<std::size_t>((l - m + nodes) % nodes)] * centred[static_cast<std::size_t>(m)];
        }
        smeared[static_cast<std::size_t>(l)] = v_prime.a0() + gain * h * sum;
    }
    const TrigPolynomial projected = TrigPolynomial::project(
        [&](double t) {
            const auto idx = static_cast<std::size_t>(std::lround(t / h)) % static_cast<std::size_t>(nodes);
            return smeared[idx];
        },
        n, nodes);
    // the constant term passes through unchanged
    TrigPolynomial f = TrigPolynomial::constant(v_prime.a0());
    for (int k = 1; k <= n; ++k) f.set(k, projected.a(k), projected.b(k));
    return {std::move(f), v_prime, sd.K(), ForceRoute::convolution};
}

TrigPolynomial design_potential(const TrigPolynomial& f_target, const StationaryDensity& sd) {
    require_manifold(sd, "design_potential");
    const StationaryDensity table = sd.extended(f_target.degree());
    TrigPolynomial v = TrigPolynomial::constant(f_target.a0());
    for (int k = 1; k <= f_target.degree(); ++k) {
        const double inverse_gain = table.critical_amplitude(k);
        v.set(k, inverse_gain * f_target.a(k), inverse_gain * f_target.b(k));
    }
    return v;
}

TrigPolynomial truncate_potential(const std::function<double(double)>& v_prime, int degree) {
    return TrigPolynomial::project(v_prime, degree, std::max(256, 16 * (degree + 1)));
}

}  // namespace arlab

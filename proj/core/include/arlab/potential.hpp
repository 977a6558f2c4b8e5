#pragma once

#include "arlab/kernel.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

enum class ForceRoute { coefficient_map, convolution };

/// Leading-order drift f of the collective phase on the synchronized manifold
/// for the active rotator perturbation (p V')'. The reduced phase obeys
/// psi' = -delta f(psi).
struct EffectiveForce {
    TrigPolynomial f;
    TrigPolynomial source_potential;  // V'
    double K = 0.0;
    ForceRoute route = ForceRoute::coefficient_map;
};

/// A_0 = a_0, A_k = D(K) (I_k / I_0) a_k, B_k likewise.
EffectiveForce effective_force_coeff(const TrigPolynomial& v_prime, const StationaryDensity& sd);

/// f = a_0 + D(K) (q_0 * (V' - a_0)), evaluated as a discrete circular
/// convolution of sampled q_0 and V' on 4 max(degree, k_max) nodes and
/// projected back onto the degree of V'.
EffectiveForce effective_force_conv(const TrigPolynomial& v_prime, const StationaryDensity& sd);

/// Inverse of the coefficient map: the potential V' whose effective force is
/// f_target (a_0 = A_0, a_k = a_{c,k}(K) A_k, b_k likewise).
TrigPolynomial design_potential(const TrigPolynomial& f_target, const StationaryDensity& sd);

/// Projection of a general periodic V' onto degree n before mapping.
TrigPolynomial truncate_potential(const std::function<double(double)>& v_prime, int degree);

}  // namespace arlab

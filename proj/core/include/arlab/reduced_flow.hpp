#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/kernel.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

enum class FlowKind { periodic, fixed_points, degenerate };

std::string to_string(FlowKind kind);

struct FixedPoint {
    double psi = 0.0;  // in [0, 2 pi)
    bool stable = false;
    double slope = 0.0;  // f'(psi)
};

/// Qualitative outcome of psi' = -f(psi) on the circle.
///
/// A zero psi* of f is stable iff f'(psi*) > 0. `degenerate` flags a zero with
/// |f'| below the requested tolerance (a non-hyperbolic flow), in which case
/// `fixed_points` still lists every zero that was located.
struct FlowClassification {
    FlowKind kind = FlowKind::periodic;
    double period = 0.0;  // reduced-time period, meaningful iff kind == periodic
    std::vector<FixedPoint> fixed_points;

    nlohmann::json to_json() const;
};

FlowClassification classify(const TrigPolynomial& f, double tol = 1e-8);

/// \oint dpsi / |f(psi)| for a zero-free f (midpoint rule, doubled until the
/// relative change drops below 1e-13). Throws DomainError if f vanishes.
double period_of(const TrigPolynomial& f);

/// tau(a, K) = 2 pi / sqrt(1 - (a / a_c(K))^2) for V' = 1 + a sin theta.
/// The full-system period is tau / delta + O(delta).
double period_first_harmonic(double a, double K);
double period_first_harmonic(double a, const StationaryDensity& sd);

/// (I_0^2 - 1) / (I_0 I_j) at x = 2 K r(K). Throws DomainError for K <= 1.
double critical_amplitude(int j, double K);

struct PhaseTrajectory {
    std::vector<double> t;
    std::vector<double> psi;  // unwrapped
};

/// Classical RK4 for psi' = -f(psi); records every `stride`-th step and the
/// final state.
PhaseTrajectory integrate_phase(const TrigPolynomial& f, double psi0, double t_end, double dt,
                                int stride = 1);

/// Time for the RK4 solution started at psi0 to travel 2 pi. The crossing is
/// located inside the final step by cubic Hermite interpolation so the error
/// stays O(dt^4). Throws NumericError if max_time elapses first.
double winding_time(const TrigPolynomial& f, double psi0, double dt, double max_time = 1e7);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct TransitionScan {
    std::vector<double> points;
    std::vector<Interval> unresolved;  // stretches classified degenerate throughout
};

/// Scan a one-parameter family of potentials V'(s), classify the effective
/// force at each sample and bisect every change of (kind, number of fixed
/// points) down to `tol`.
TransitionScan transition_points(const std::function<TrigPolynomial(double)>& family, double K,
                                 Interval range, int samples = 200, double tol = 1e-10);

}  // namespace arlab

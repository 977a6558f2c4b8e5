#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/kernel.hpp"
#include "arlab/spectral_density.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

/// Fourier-Galerkin integrator for the mean-field active rotator equation
///
///   dp/dt = 1/2 p'' - d/dtheta [ p (J*p - delta V') ],  (J*p)(theta) = -K Im(e^{i theta} conj Z).
///
/// Diffusion is integrated exactly through the factor exp(-k^2 t / 2) and the
/// drift by the four-stage integrating-factor Runge-Kutta scheme. The drift
/// velocity J*p - delta V' is a trigonometric polynomial of degree
/// max(1, deg V'), so the product p (J*p - delta V') is formed by exact
/// discrete convolution of the coefficient sequences and truncated to |k| <= N
/// (no aliasing is possible). c_0 is re-pinned to 1/(2 pi) after each step.
///
/// A solver owns scratch storage and is not shareable between threads;
/// independent instances are.
class FokkerPlanckSolver {
public:
    FokkerPlanckSolver(TrigPolynomial v_prime, double K, double delta, int n_modes, double dt);

    /// Explicit-stage stability limit 2 sqrt(2) / (N (K + delta |V'|_1)).
    static double stability_bound(const TrigPolynomial& v_prime, double K, double delta, int n_modes);
    double stability_bound() const { return stability_bound(v_prime_, K_, delta_, n_modes_); }

    int n_modes() const noexcept { return n_modes_; }
    double dt() const noexcept { return dt_; }
    double K() const noexcept { return K_; }
    double delta() const noexcept { return delta_; }
    const TrigPolynomial& v_prime() const noexcept { return v_prime_; }

    void step(SpectralDensity& state);
    /// Whole steps of dt until `duration` has elapsed (last step shortened).
    void advance(SpectralDensity& state, double duration);

    /// Drift part -i k (p W)_k, k = 0..N, of the right-hand side.
    void drift(std::span<const std::complex<double>> c, std::span<std::complex<double>> out) const;

private:
    void lawson_step(std::span<std::complex<double>> c, double h);

    TrigPolynomial v_prime_;
    double K_;
    double delta_;
    int n_modes_;
    double dt_;
    int drift_degree_;
    std::vector<std::complex<double>> force_modes_;  // -delta V'_m, m = 0..drift_degree
    std::vector<double> decay_full_, decay_half_;
    std::vector<std::complex<double>> k1_, k2_, k3_, k4_, stage_;
};

/// One step of the solver on a copy of `state`. Throws DomainError (quoting
/// the bound) if dt exceeds the stability limit for the chosen truncation.
SpectralDensity step(const SpectralDensity& state, const TrigPolynomial& v_prime, double K,
                     double delta, double dt);

/// Parameters of a PDE run, readable from / writable to JSON.
struct PdeRunConfig {
    int n_modes = 50;
    double dt = 1e-3;
    double t_end = 100.0;
    double transient = -1.0;  // < 0: one predicted period, at least 200 time units
    int windings = 5;
    double max_time = 2e5;
    double sample_interval = 1.0;
    TrigPolynomial v_prime = TrigPolynomial::constant(1.0);
    double K = 2.0;
    double delta = 0.0;

    nlohmann::json to_json() const;
    static PdeRunConfig from_json(const nlohmann::json& j, PdeRunConfig defaults);
    static PdeRunConfig from_json(const nlohmann::json& j) { return from_json(j, PdeRunConfig{}); }
};

struct PeriodMeasurement {
    double period = 0.0;
    int windings = 0;
    double transient = 0.0;
    double elapsed = 0.0;
    double min_density = 0.0;
    bool resolved = true;
    std::vector<double> crossing_times;
};

/// Start at q_0, integrate past the transient, then average the time per 2 pi
/// of unwrapped arg Z over `windings` turns. Throws NumericError when the
/// phase fails to wind before `max_time`.
PeriodMeasurement measure_period(const TrigPolynomial& v_prime, double K, double delta,
                                 const PdeRunConfig& run);

struct TrajectorySample {
    double t = 0.0;
    double phase_unwrapped = 0.0;
    std::complex<double> Z;
    double dist_to_M = 0.0;  // L2 distance to q at the isochronal phase; NaN if K <= 1
};

/// Advance `state` to `t_end`, recording a sample every `sample_interval`.
std::vector<TrajectorySample> record_trajectory(SpectralDensity& state, FokkerPlanckSolver& solver,
                                                double t_end, double sample_interval);

}  // namespace arlab

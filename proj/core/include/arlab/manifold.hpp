#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/kernel.hpp"
#include "arlab/spectral_density.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

/// First-order shape correction n_psi of the perturbed manifold at phase psi.
/// `coeffs` holds n_k for k = 0..N (n_0 = 0, n_{-k} = conj(n_k)).
struct ManifoldCorrection {
    double psi = 0.0;
    std::vector<std::complex<double>> coeffs;
    double residual = 0.0;    // H_{-1} norm of L n - rhs
    double constraint = 0.0;  // |(n, q'_psi)_{-1,1/q_psi}|
    double rcond = 0.0;
    bool ill_conditioned = false;
    std::complex<double> multiplier;  // Lagrange multiplier on q'_psi

    int n_modes() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double theta) const noexcept;
    double l2_norm() const noexcept;
};

/// Linearisation of the delta = 0 equation at q_psi (sign chosen so that the
/// spectrum is non-negative):
///   (L u)_k = k^2/2 u_k + i k [ w_1 u_{k-1} + w_{-1} u_{k+1}
///                               + i pi K (q_{k-1} u_1 - q_{k+1} u_{-1}) ],
/// with w_1 = i pi K q_1. Input and output are modes 0..N of real functions.
std::vector<std::complex<double>> apply_linearized_operator(std::span<const std::complex<double>> u,
                                                            const StationaryDensity& sd, double psi);

/// Modes 0..N of G[q_psi] - f(psi) q'_psi, where G[p] = (p V')'.
std::vector<std::complex<double>> manifold_rhs(const TrigPolynomial& v_prime, const StationaryDensity& sd,
                                               double psi, int n_modes);

/// Solves L n = rhs subject to (n, q'_psi) = 0 via the bordered system
/// [L q'; l 0]. A reciprocal condition estimate below `rcond_threshold`
/// marks the result ill-conditioned.
ManifoldCorrection solve_manifold_correction(double psi, const TrigPolynomial& v_prime,
                                             const StationaryDensity& sd, int n_modes = 50,
                                             double rcond_threshold = 1e-12);

struct ResidualRunConfig {
    int n_modes = 50;
    double dt = 1e-3;
    double settle = 50.0;           // initial layer excluded from the maxima
    double difference_step = 0.25;  // spacing of the phase samples
    double duration = -1.0;         // < 0: one reduced period / delta
    int shape_samples = 200;

    nlohmann::json to_json() const;
    static ResidualRunConfig from_json(const nlohmann::json& j, ResidualRunConfig defaults);
    static ResidualRunConfig from_json(const nlohmann::json& j) { return from_json(j, ResidualRunConfig{}); }
};

struct ResidualEntry {
    double delta = 0.0;
    double residual = 0.0;        // max_t |psi' + delta f(psi)|
    double shape_distance = 0.0;  // max_t ||p - q_psi - delta n_psi||_{H1}
    double duration = 0.0;
    std::optional<double> failure_time;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;
    double exponent = NAN;        // least-squares slope of log residual vs log delta
    double shape_exponent = NAN;
    double max_scaled_residual = NAN;  // max residual / delta^2

    nlohmann::json to_json() const;
};

/// Runs the PDE from q_0 + delta n_0 for each delta, tracks the isochronal
/// phase and compares its velocity with -delta f. Runs that leave the
/// projection window are reported with their failure time and excluded from
/// the fits.
ResidualReport phase_velocity_residual(const TrigPolynomial& v_prime, double K,
                                       const std::vector<double>& deltas,
                                       const ResidualRunConfig& config = {});

/// Least-squares slope of log(y) against log(x) over pairs with y > 0.
double fit_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace arlab

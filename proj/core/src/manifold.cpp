#include "arlab/manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arlab/circle_function.hpp"
#include "arlab/errors.hpp"
#include "arlab/fokker_planck.hpp"
#include "arlab/potential.hpp"
#include "arlab/reduced_flow.hpp"

namespace arlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
using cplx = std::complex<double>;

// q_psi coefficients for k in [-n, n]
struct Profile {
    int n;
    std::vector<cplx> c;
    cplx operator[](int k) const {
        if (std::abs(k) > n) return {0.0, 0.0};
        return c[static_cast<std::size_t>(k + n)];
    }
};

Profile profile(const StationaryDensity& sd, double psi, int n) {
    const StationaryDensity table = sd.extended(n + 1);
    Profile p{n + 1, std::vector<cplx>(static_cast<std::size_t>(2 * (n + 1) + 1))};
    for (int k = -p.n; k <= p.n; ++k) {
        p.c[static_cast<std::size_t>(k + p.n)] =
            table.bessel().ratio(std::abs(k)) / kTwoPi * std::polar(1.0, -k * psi);
    }
    return p;
}

// Dense matrix of L on modes -N..N without k = 0 (index k + N, k < 0; k + N - 1, k > 0).
int index_of(int k, int N) { return k < 0 ? k + N : k + N - 1; }

Eigen::MatrixXcd operator_matrix(const Profile& q, double K, int N) {
    const int size = 2 * N;
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(size, size);
    const cplx w1 = cplx(0.0, kPi * K) * q[1];
    const cplx wm1 = std::conj(w1);
    const cplx ipk(0.0, kPi * K);
    auto add = [&](int row_k, int col_k, cplx value) {
        if (col_k == 0 || std::abs(col_k) > N) return;
        L(index_of(row_k, N), index_of(col_k, N)) += value;
    };
    for (int k = -N; k <= N; ++k) {
        if (k == 0) continue;
        const cplx ik(0.0, static_cast<double>(k));
        add(k, k, 0.5 * k * k);
        add(k, k - 1, ik * w1);
        add(k, k + 1, ik * wm1);
        add(k, 1, ik * ipk * q[k - 1]);
        add(k, -1, -ik * ipk * q[k + 1]);
    }
    return L;
}

cplx mode_of(std::span<const cplx> u, int k) {
    const int n = static_cast<int>(u.size()) - 1;
    if (std::abs(k) > n) return {0.0, 0.0};
    return k >= 0 ? u[static_cast<std::size_t>(k)] : std::conj(u[static_cast<std::size_t>(-k)]);
}

double h1_norm_sq(std::span<const cplx> u) {
    double s = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) s += 2.0 * (1.0 + double(k * k)) * std::norm(u[k]);
    return kTwoPi * s;
}

}  // namespace

double ManifoldCorrection::operator()(double theta) const noexcept {
    double sum = 0.0;
    for (int k = 1; k <= n_modes(); ++k) {
        sum += 2.0 * (coeffs[static_cast<std::size_t>(k)] * std::polar(1.0, k * theta)).real();
    }
    return sum;
}

double ManifoldCorrection::l2_norm() const noexcept {
    double s = 0.0;
    for (int k = 1; k <= n_modes(); ++k) s += 2.0 * std::norm(coeffs[static_cast<std::size_t>(k)]);
    return std::sqrt(kTwoPi * s);
}

std::vector<cplx> apply_linearized_operator(std::span<const cplx> u, const StationaryDensity& sd,
                                            double psi) {
    if (!sd.synchronized()) throw DomainError("apply_linearized_operator: K must be > 1");
    const int N = static_cast<int>(u.size()) - 1;
    const Profile q = profile(sd, psi, N);
    const double K = sd.coupling();
    const cplx w1 = cplx(0.0, kPi * K) * q[1];
    const cplx ipk(0.0, kPi * K);
    const cplx u1 = mode_of(u, 1), um1 = mode_of(u, -1);
    std::vector<cplx> out(u.size());
    for (int k = 1; k <= N; ++k) {
        const cplx ik(0.0, static_cast<double>(k));
        out[static_cast<std::size_t>(k)] =
            0.5 * k * k * u[static_cast<std::size_t>(k)] +
            ik * (w1 * mode_of(u, k - 1) + std::conj(w1) * mode_of(u, k + 1) +
                  ipk * (q[k - 1] * u1 - q[k + 1] * um1));
    }
    return out;
}

std::vector<cplx> manifold_rhs(const TrigPolynomial& v_prime, const StationaryDensity& sd, double psi,
                               int n_modes) {
    if (!sd.synchronized()) throw DomainError("manifold_rhs: K must be > 1");
    const Profile q = profile(sd, psi, n_modes + v_prime.degree());
    const double f = effective_force_coeff(v_prime, sd).f(psi);
    std::vector<cplx> rhs(static_cast<std::size_t>(n_modes) + 1);
    for (int k = 1; k <= n_modes; ++k) {
        cplx prod = q[k] * v_prime.a0();
        for (int m = 1; m <= v_prime.degree(); ++m) {
            prod += q[k - m] * v_prime.mode(m) + q[k + m] * v_prime.mode(-m);
        }
        const cplx ik(0.0, static_cast<double>(k));
        rhs[static_cast<std::size_t>(k)] = ik * prod - f * ik * q[k];
    }
    return rhs;
}

ManifoldCorrection solve_manifold_correction(double psi, const TrigPolynomial& v_prime,
                                             const StationaryDensity& sd, int N, double rcond_threshold) {
    if (!sd.synchronized()) throw DomainError("solve_manifold_correction: K must be > 1");
    if (N < 2) throw DomainError("solve_manifold_correction: need at least 2 modes");
    const StationaryDensity table = sd.extended(N + 1);
    const Profile q = profile(table, psi, N);
    const int size = 2 * N;

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size + 1, size + 1);
    A.topLeftCorner(size, size) = operator_matrix(q, table.coupling(), N);
    const std::vector<cplx> rhs_pos = manifold_rhs(v_prime, table, psi, N);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(size + 1);
    for (int k = -N; k <= N; ++k) {
        if (k == 0) continue;
        const int i = index_of(k, N);
        A(i, size) = cplx(0.0, static_cast<double>(k)) * q[k];        // q'_psi
        A(size, i) = tangent_pairing_mode(k, table, psi);               // (e_k, q'_psi)
        b(i) = mode_of(rhs_pos, k);
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::VectorXcd x = lu.solve(b);

    ManifoldCorrection out;
    out.psi = psi;
    out.rcond = lu.rcond();
    out.ill_conditioned = !(out.rcond >= rcond_threshold);
    out.multiplier = x(size);
    out.coeffs.assign(static_cast<std::size_t>(N) + 1, {0.0, 0.0});
    for (int k = 1; k <= N; ++k) {
        // symmetrise against round-off
        out.coeffs[static_cast<std::size_t>(k)] = 0.5 * (x(index_of(k, N)) + std::conj(x(index_of(-k, N))));
    }

    const std::vector<cplx> Ln = apply_linearized_operator(out.coeffs, table, psi);
    std::vector<cplx> diff(Ln.size());
    for (std::size_t k = 0; k < Ln.size(); ++k) diff[k] = Ln[k] - rhs_pos[k];
    out.residual = hminus1_norm(std::span<const cplx>(diff).subspan(1));

    double pairing = 0.0;
    for (int k = 1; k <= N; ++k) {
        pairing += 2.0 * (out.coeffs[static_cast<std::size_t>(k)] * tangent_pairing_mode(k, table, psi)).real();
    }
    out.constraint = std::abs(pairing);
    return out;
}

nlohmann::json ResidualRunConfig::to_json() const {
    return {{"n_modes", n_modes},
            {"dt", dt},
            {"settle", settle},
            {"difference_step", difference_step},
            {"duration", duration},
            {"shape_samples", shape_samples}};
}

ResidualRunConfig ResidualRunConfig::from_json(const nlohmann::json& j, ResidualRunConfig c) {
    c.n_modes = j.value("n_modes", c.n_modes);
    c.dt = j.value("dt", c.dt);
    c.settle = j.value("settle", c.settle);
    c.difference_step = j.value("difference_step", c.difference_step);
    c.duration = j.value("duration", c.duration);
    c.shape_samples = j.value("shape_samples", c.shape_samples);
    return c;
}

nlohmann::json ResidualReport::to_json() const {
    auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries) {
        rows.push_back({{"delta", e.delta},
                        {"residual", e.residual},
                        {"shape_distance", e.shape_distance},
                        {"duration", e.duration},
                        {"failure_time", e.failure_time ? nlohmann::json(*e.failure_time) : nlohmann::json(nullptr)}});
    }
    return {{"entries", rows},
            {"exponent", number(exponent)},
            {"shape_exponent", number(shape_exponent)},
            {"max_scaled_residual", number(max_scaled_residual)}};
}

double fit_log_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return NAN;
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? NAN : (n * sxy - sx * sy) / den;
}

namespace {

ResidualEntry residual_run(const TrigPolynomial& v_prime, const StationaryDensity& sd, const TrigPolynomial& f,
                           double delta, const ResidualRunConfig& config, double reduced_period) {
    ResidualEntry entry;
    entry.delta = delta;
    const int N = config.n_modes;
    const StationaryDensity table = sd.extended(N + 1);
    entry.duration = config.duration > 0.0 ? config.duration : reduced_period / std::abs(delta);
    const double h = config.difference_step;
    const double t_total = config.settle + entry.duration;

    const ManifoldCorrection n0 = solve_manifold_correction(0.0, v_prime, table, N);
    SpectralDensity state = SpectralDensity::from_stationary(table, N).perturbed(
        std::span<const cplx>(n0.coeffs).subspan(1), delta);
    FokkerPlanckSolver solver(v_prime, table.coupling(), delta, N, config.dt);

    const auto samples = static_cast<long long>(std::floor(t_total / h));
    const long long shape_every = std::max<long long>(1, static_cast<long long>(entry.duration / h) /
                                                             std::max(1, config.shape_samples));
    std::vector<double> phase;
    phase.reserve(static_cast<std::size_t>(samples) + 1);
    double near = 0.0;
    for (long long i = 0; i <= samples; ++i) {
        if (i > 0) solver.advance(state, h * static_cast<double>(i) - state.time());
        double psi;
        try {
            psi = isochronal_projection(state, table, near);
        } catch (const std::exception&) {
            entry.failure_time = state.time();
            break;
        }
        near = psi;
        phase.push_back(psi);
        const double t = state.time();
        if (t >= config.settle && (i % shape_every) == 0) {
            const ManifoldCorrection n = solve_manifold_correction(psi, v_prime, table, N);
            const SpectralDensity q = SpectralDensity::from_stationary(table, N, psi);
            std::vector<cplx> diff(static_cast<std::size_t>(N) + 1);
            for (int k = 1; k <= N; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                diff[kk] = state.coeffs()[kk] - q.coeffs()[kk] - delta * n.coeffs[kk];
            }
            entry.shape_distance = std::max(entry.shape_distance, std::sqrt(h1_norm_sq(diff)));
        }
    }
    for (std::size_t i = 1; i + 1 < phase.size(); ++i) {
        const double t = h * static_cast<double>(i);
        if (t < config.settle) continue;
        const double velocity = (phase[i + 1] - phase[i - 1]) / (2.0 * h);
        entry.residual = std::max(entry.residual, std::abs(velocity + delta * f(phase[i])));
    }
    return entry;
}

}  // namespace

ResidualReport phase_velocity_residual(const TrigPolynomial& v_prime, double K, const std::vector<double>& deltas,
                                       const ResidualRunConfig& config) {
    const StationaryDensity sd = solve_order_parameter(K);
    if (!sd.synchronized()) throw DomainError("phase_velocity_residual: K must be > 1");
    if (!(config.difference_step > 0.0)) throw DomainError("phase_velocity_residual: difference_step must be > 0");
    const TrigPolynomial f = effective_force_coeff(v_prime, sd).f;
    const FlowClassification reduced = classify(f);
    const double period = reduced.kind == FlowKind::periodic ? reduced.period : kTwoPi;

    ResidualReport report;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw DomainError("phase_velocity_residual: deltas must be > 0");
        report.entries.push_back(residual_run(v_prime, sd, f, delta, config, period));
    }
    std::vector<double> d, r, s;
    report.max_scaled_residual = 0.0;
    for (const auto& e : report.entries) {
        if (e.failure_time) continue;
        d.push_back(e.delta);
        r.push_back(e.residual);
        s.push_back(e.shape_distance);
        report.max_scaled_residual = std::max(report.max_scaled_residual, e.residual / (e.delta * e.delta));
    }
    report.exponent = fit_log_slope(d, r);
    report.shape_exponent = fit_log_slope(d, s);
    return report;
}

}  // namespace arlab

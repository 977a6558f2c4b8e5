#include "arlab/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "arlab/errors.hpp"
#include "arlab/potential.hpp"
#include "arlab/reduced_flow.hpp"

namespace arlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

FokkerPlanckSolver::FokkerPlanckSolver(TrigPolynomial v_prime, double K, double delta, int n_modes,
                                       double dt)
    : v_prime_(std::move(v_prime)), K_(K), delta_(delta), n_modes_(n_modes), dt_(dt) {
    if (n_modes_ < 2) throw DomainError("FokkerPlanckSolver: need at least 2 modes");
    if (!(dt_ > 0.0)) throw DomainError("FokkerPlanckSolver: dt must be > 0");
    if (!(K_ >= 0.0)) throw DomainError("FokkerPlanckSolver: K must be >= 0");
    const double bound = stability_bound();
    if (dt_ > bound) {
        std::ostringstream msg;
        msg << "FokkerPlanckSolver: dt = " << dt_ << " exceeds the stability bound " << bound
            << " for N = " << n_modes_;
        throw DomainError(msg.str());
    }
    drift_degree_ = std::max(1, v_prime_.degree());
    force_modes_.resize(static_cast<std::size_t>(drift_degree_) + 1);
    for (int m = 0; m <= drift_degree_; ++m) force_modes_[static_cast<std::size_t>(m)] = -delta_ * v_prime_.mode(m);

    const auto size = static_cast<std::size_t>(n_modes_) + 1;
    decay_full_.resize(size);
    decay_half_.resize(size);
    for (int k = 0; k <= n_modes_; ++k) {
        decay_full_[static_cast<std::size_t>(k)] = std::exp(-0.5 * k * k * dt_);
        decay_half_[static_cast<std::size_t>(k)] = std::exp(-0.25 * k * k * dt_);
    }
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &stage_}) v->assign(size, {0.0, 0.0});
}

double FokkerPlanckSolver::stability_bound(const TrigPolynomial& v_prime, double K, double delta,
                                           int n_modes) {
    const double speed = K + std::abs(delta) * v_prime.coefficient_l1();
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::sqrt2 / (n_modes * speed);
}

void FokkerPlanckSolver::drift(std::span<const std::complex<double>> c,
                               std::span<std::complex<double>> out) const {
    const int N = n_modes_;
    const int M = drift_degree_;
    // W = J*p - delta V':  W_1 = i pi K c_1 - delta V'_1, W_{-m} = conj(W_m)
    std::complex<double> w_pos[64 + 1];
    std::vector<std::complex<double>> w_heap;
    std::complex<double>* w = w_pos;
    if (M > 64) {
        w_heap.resize(static_cast<std::size_t>(M) + 1);
        w = w_heap.data();
    }
    for (int m = 0; m <= M; ++m) w[m] = force_modes_[static_cast<std::size_t>(m)];
    w[1] += std::complex<double>(0.0, kPi * K_) * c[1];

    auto coeff = [&](int j) -> std::complex<double> {
        if (j >= 0) return j <= N ? c[static_cast<std::size_t>(j)] : std::complex<double>{};
        return -j <= N ? std::conj(c[static_cast<std::size_t>(-j)]) : std::complex<double>{};
    };

    out[0] = {0.0, 0.0};
    for (int k = 1; k <= N; ++k) {
        std::complex<double> prod = c[static_cast<std::size_t>(k)] * w[0];
        for (int m = 1; m <= M; ++m) {
            prod += coeff(k - m) * w[m] + coeff(k + m) * std::conj(w[m]);
        }
        out[static_cast<std::size_t>(k)] = std::complex<double>(0.0, -static_cast<double>(k)) * prod;
    }
}

void FokkerPlanckSolver::lawson_step(std::span<std::complex<double>> c, double h) {
    const auto size = c.size();
    std::vector<double> full, half;
    const std::vector<double>* E = &decay_full_;
    const std::vector<double>* E2 = &decay_half_;
    if (h != dt_) {
        full.resize(size);
        half.resize(size);
        for (std::size_t k = 0; k < size; ++k) {
            const double kk = static_cast<double>(k) * static_cast<double>(k);
            full[k] = std::exp(-0.5 * kk * h);
            half[k] = std::exp(-0.25 * kk * h);
        }
        E = &full;
        E2 = &half;
    }

    drift(c, k1_);
    for (std::size_t k = 0; k < size; ++k) stage_[k] = (*E2)[k] * (c[k] + 0.5 * h * k1_[k]);
    drift(stage_, k2_);
    for (std::size_t k = 0; k < size; ++k) stage_[k] = (*E2)[k] * c[k] + 0.5 * h * k2_[k];
    drift(stage_, k3_);
    for (std::size_t k = 0; k < size; ++k) stage_[k] = (*E)[k] * c[k] + h * (*E2)[k] * k3_[k];
    drift(stage_, k4_);
    for (std::size_t k = 0; k < size; ++k) {
        c[k] = (*E)[k] * c[k] +
               h / 6.0 * ((*E)[k] * k1_[k] + 2.0 * (*E2)[k] * (k2_[k] + k3_[k]) + k4_[k]);
    }
}

void FokkerPlanckSolver::step(SpectralDensity& state) {
    if (state.n_modes() != n_modes_) throw ContractError("FokkerPlanckSolver::step: truncation mismatch");
    lawson_step(state.coeffs(), dt_);
    state.pin_mass();
    state.set_time(state.time() + dt_);
}

void FokkerPlanckSolver::advance(SpectralDensity& state, double duration) {
    if (state.n_modes() != n_modes_) throw ContractError("FokkerPlanckSolver::advance: truncation mismatch");
    const double t_final = state.time() + duration;
    const auto steps = static_cast<long long>(std::floor(duration / dt_ + 1e-9));
    const double t0 = state.time();
    for (long long n = 1; n <= steps; ++n) {
        lawson_step(state.coeffs(), dt_);
        state.pin_mass();
        state.set_time(t0 + static_cast<double>(n) * dt_);
    }
    const double rest = t_final - state.time();
    if (rest > 1e-12 * std::max(1.0, std::abs(t_final))) {
        lawson_step(state.coeffs(), rest);
        state.pin_mass();
    }
    state.set_time(t_final);
}

SpectralDensity step(const SpectralDensity& state, const TrigPolynomial& v_prime, double K,
                     double delta, double dt) {
    FokkerPlanckSolver solver(v_prime, K, delta, state.n_modes(), dt);
    SpectralDensity next = state;
    solver.step(next);
    return next;
}

nlohmann::json PdeRunConfig::to_json() const {
    return {{"n_modes", n_modes},     {"dt", dt},
            {"t_end", t_end},         {"transient", transient},
            {"windings", windings},   {"max_time", max_time},
            {"sample_interval", sample_interval},
            {"V", v_prime.to_json()}, {"K", K},
            {"delta", delta}};
}

PdeRunConfig PdeRunConfig::from_json(const nlohmann::json& j, PdeRunConfig c) {
    c.n_modes = j.value("n_modes", c.n_modes);
    c.dt = j.value("dt", c.dt);
    c.t_end = j.value("t_end", c.t_end);
    c.transient = j.value("transient", c.transient);
    c.windings = j.value("windings", c.windings);
    c.max_time = j.value("max_time", c.max_time);
    c.sample_interval = j.value("sample_interval", c.sample_interval);
    if (j.contains("V")) c.v_prime = TrigPolynomial::from_json(j.at("V"));
    c.K = j.value("K", c.K);
    c.delta = j.value("delta", c.delta);
    return c;
}

PeriodMeasurement measure_period(const TrigPolynomial& v_prime, double K, double delta,
                                 const PdeRunConfig& run) {
    if (run.windings < 1) throw DomainError("measure_period: windings must be >= 1");
    if (!(delta != 0.0)) throw DomainError("measure_period: delta = 0 has no drift along the manifold");
    const StationaryDensity sd = solve_order_parameter(K);
    if (!sd.synchronized()) throw DomainError("measure_period: K must be > 1");

    double transient = run.transient;
    if (transient < 0.0) {
        transient = 200.0;
        const FlowClassification reduced = classify(effective_force_coeff(v_prime, sd).f);
        if (reduced.kind == FlowKind::periodic) {
            transient = std::max(transient, reduced.period / std::abs(delta));
        }
    }

    FokkerPlanckSolver solver(v_prime, K, delta, run.n_modes, run.dt);
    SpectralDensity state = SpectralDensity::from_stationary(sd, run.n_modes);
    solver.advance(state, transient);

    PeriodMeasurement out;
    out.transient = transient;
    out.min_density = state.min_value();

    PhaseTracker tracker;
    const double t_start = state.time();
    const double phase_start = tracker.update(state);
    double prev_t = t_start;
    double prev_travel = 0.0;
    int done = 0;
    long long steps = 0;
    while (done < run.windings) {
        if (state.time() - t_start > run.max_time) {
            throw NumericError("measure_period: phase did not wind within the time budget",
                               prev_travel / kTwoPi);
        }
        solver.step(state);
        const double travel = std::abs(tracker.update(state) - phase_start);
        const double level = kTwoPi * (done + 1);
        if (travel >= level) {
            const double frac = (level - prev_travel) / (travel - prev_travel);
            out.crossing_times.push_back(prev_t + frac * (state.time() - prev_t));
            ++done;
        }
        prev_t = state.time();
        prev_travel = travel;
        if (++steps % 1000 == 0) out.min_density = std::min(out.min_density, state.min_value(128));
    }
    out.windings = done;
    out.period = (out.crossing_times.back() - t_start) / done;
    out.elapsed = state.time();
    out.resolved = state.resolved();
    return out;
}

std::vector<TrajectorySample> record_trajectory(SpectralDensity& state, FokkerPlanckSolver& solver,
                                                double t_end, double sample_interval) {
    if (!(sample_interval > 0.0)) throw DomainError("record_trajectory: sample_interval must be > 0");
    const StationaryDensity sd = solve_order_parameter(solver.K());
    const std::optional<StationaryDensity> manifold =
        sd.synchronized() ? std::optional<StationaryDensity>(sd.extended(solver.n_modes())) : std::nullopt;

    PhaseTracker tracker;
    std::vector<TrajectorySample> out;
    auto record = [&] {
        TrajectorySample s;
        s.t = state.time();
        s.Z = state.order_parameter().Z;
        s.phase_unwrapped = std::abs(s.Z) >= 1e-8 ? tracker.update(std::arg(s.Z)) : NAN;
        s.dist_to_M = NAN;
        if (manifold && std::abs(s.Z) >= 1e-8) {
            try {
                const double psi = isochronal_projection(state, *manifold);
                s.dist_to_M = l2_distance(state, SpectralDensity::from_stationary(*manifold, state.n_modes(), psi));
            } catch (const NumericError&) {
            }
        }
        out.push_back(s);
    };
    record();
    const auto samples = static_cast<long long>(std::floor((t_end - state.time()) / sample_interval + 1e-9));
    const double t0 = state.time();
    for (long long i = 1; i <= samples; ++i) {
        solver.advance(state, t0 + static_cast<double>(i) * sample_interval - state.time());
        record();
    }
    if (t_end - state.time() > 1e-12) {
        solver.advance(state, t_end - state.time());
        record();
    }
    return out;
}

}  // namespace arlab

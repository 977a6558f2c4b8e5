#include "arlab/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arlab/circle_function.hpp"
#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kIncoherentThreshold = 1e-8;

double wrap_to_pi(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - kPi;
}

}  // namespace

SpectralDensity::SpectralDensity(int n_modes) {
    if (n_modes < 1) throw DomainError("SpectralDensity: need at least one mode");
    coeffs_.assign(static_cast<std::size_t>(n_modes) + 1, {0.0, 0.0});
    pin_mass();
}

SpectralDensity::SpectralDensity(std::vector<std::complex<double>> coeffs, double time)
    : coeffs_(std::move(coeffs)), time_(time) {
    if (coeffs_.size() < 2) throw DomainError("SpectralDensity: need at least one mode");
    pin_mass();
}

SpectralDensity SpectralDensity::from_stationary(const StationaryDensity& sd, int n_modes, double psi) {
    const StationaryDensity table = sd.extended(n_modes);
    std::vector<std::complex<double>> c(static_cast<std::size_t>(n_modes) + 1);
    for (int k = 0; k <= n_modes; ++k) {
        c[static_cast<std::size_t>(k)] = table.fourier_coefficient(k) * std::polar(1.0, -k * psi);
    }
    return SpectralDensity(std::move(c));
}

SpectralDensity SpectralDensity::from_function(const std::function<double(double)>& density,
                                               int n_modes, int samples) {
    if (samples <= 0) samples = std::max(1024, 8 * n_modes);
    std::vector<double> values(static_cast<std::size_t>(samples));
    double mass = 0.0;
    for (int m = 0; m < samples; ++m) {
        values[static_cast<std::size_t>(m)] = density(kTwoPi * m / samples);
        mass += values[static_cast<std::size_t>(m)];
    }
    mass *= kTwoPi / samples;
    if (!(mass > 0.0)) throw DomainError("SpectralDensity::from_function: density has no mass");
    std::vector<std::complex<double>> c(static_cast<std::size_t>(n_modes) + 1);
    for (int k = 0; k <= n_modes; ++k) {
        std::complex<double> sum{0.0, 0.0};
        for (int m = 0; m < samples; ++m) {
            sum += values[static_cast<std::size_t>(m)] * std::polar(1.0, -kTwoPi * k * m / samples);
        }
        c[static_cast<std::size_t>(k)] = sum / (static_cast<double>(samples) * mass);
    }
    return SpectralDensity(std::move(c));
}

std::complex<double> SpectralDensity::coeff(int k) const noexcept {
    const int a = std::abs(k);
    if (a > n_modes()) return {0.0, 0.0};
    return k >= 0 ? coeffs_[static_cast<std::size_t>(a)] : std::conj(coeffs_[static_cast<std::size_t>(a)]);
}

void SpectralDensity::pin_mass() noexcept { coeffs_[0] = {1.0 / kTwoPi, 0.0}; }

OrderParameter SpectralDensity::order_parameter() const noexcept {
    // \int e^{i theta} c_{-1} e^{-i theta} = 2 pi c_{-1}
    return {kTwoPi * std::conj(coeffs_[1])};
}

double SpectralDensity::operator()(double theta) const noexcept {
    double sum = coeffs_[0].real();
    for (int k = 1; k <= n_modes(); ++k) {
        sum += 2.0 * (coeffs_[static_cast<std::size_t>(k)] * std::polar(1.0, k * theta)).real();
    }
    return sum;
}

std::vector<double> SpectralDensity::sample(int points) const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int m = 0; m < points; ++m) out[static_cast<std::size_t>(m)] = (*this)(kTwoPi * m / points);
    return out;
}

double SpectralDensity::min_value(int points) const {
    const auto values = sample(points);
    return *std::min_element(values.begin(), values.end());
}

double SpectralDensity::tail_ratio() const noexcept {
    const double first = std::abs(coeffs_[1]);
    if (first == 0.0) return std::abs(coeffs_.back()) == 0.0 ? 0.0 : INFINITY;
    return std::abs(coeffs_.back()) / first;
}

SpectralDensity SpectralDensity::resized(int n_modes) const {
    std::vector<std::complex<double>> c(static_cast<std::size_t>(n_modes) + 1, {0.0, 0.0});
    for (int k = 0; k <= std::min(n_modes, this->n_modes()); ++k) c[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)];
    return SpectralDensity(std::move(c), time_);
}

SpectralDensity SpectralDensity::perturbed(std::span<const std::complex<double>> modes, double s) const {
    SpectralDensity out = *this;
    for (std::size_t k = 1; k < modes.size() && k < out.coeffs_.size(); ++k) out.coeffs_[k] += s * modes[k];
    out.pin_mass();
    return out;
}

double l2_distance(const SpectralDensity& p, const SpectralDensity& q) {
    const int n = std::max(p.n_modes(), q.n_modes());
    double sum = std::norm(p.coeff(0) - q.coeff(0));
    for (int k = 1; k <= n; ++k) sum += 2.0 * std::norm(p.coeff(k) - q.coeff(k));
    return std::sqrt(kTwoPi * sum);
}

double h1_distance(const SpectralDensity& p, const SpectralDensity& q) {
    const int n = std::max(p.n_modes(), q.n_modes());
    double sum = std::norm(p.coeff(0) - q.coeff(0));
    for (int k = 1; k <= n; ++k) sum += 2.0 * (1.0 + static_cast<double>(k) * k) * std::norm(p.coeff(k) - q.coeff(k));
    return std::sqrt(kTwoPi * sum);
}

double hminus1_norm(std::span<const std::complex<double>> modes) {
    double sum = 0.0;
    for (std::size_t k = 1; k < modes.size(); ++k) sum += 2.0 * std::norm(modes[k]) / (static_cast<double>(k) * k);
    return std::sqrt(kTwoPi * sum);
}

double measure_phase(const SpectralDensity& state) {
    const OrderParameter op = state.order_parameter();
    if (op.modulus() < kIncoherentThreshold) {
        throw DomainError("measure_phase: |Z| below 1e-8, phase undefined at the incoherent state");
    }
    return op.phase();
}

double PhaseTracker::update(double raw_phase) {
    if (!started_) {
        unwrapped_ = raw_phase;
        started_ = true;
    } else {
        unwrapped_ += wrap_to_pi(raw_phase - unwrapped_);
    }
    return unwrapped_;
}

double PhaseTracker::update(const SpectralDensity& state) { return update(measure_phase(state)); }

double isochronal_defect(const SpectralDensity& state, const StationaryDensity& sd, double psi) {
    // (q_psi - 1/2pi, q'_psi) vanishes by parity, leaving sum_{k != 0} c_k l_k(psi)
    const StationaryDensity& table = sd;
    double sum = 0.0;
    const int n = std::min(state.n_modes(), table.bessel().k_max());
    for (int k = 1; k <= n; ++k) {
        sum += 2.0 * (state.coeffs()[static_cast<std::size_t>(k)] * tangent_pairing_mode(k, table, psi)).real();
    }
    return sum;
}

double isochronal_projection(const SpectralDensity& state, const StationaryDensity& sd) {
    return isochronal_projection(state, sd, measure_phase(state));
}

double isochronal_projection(const SpectralDensity& state, const StationaryDensity& sd, double near) {
    if (!sd.synchronized()) throw DomainError("isochronal_projection: K must be > 1");
    const StationaryDensity table = sd.extended(state.n_modes());
    const double centre = near + wrap_to_pi(measure_phase(state) - near);
    auto F = [&](double psi) { return isochronal_defect(state, table, psi); };

    // the defect increases through the root on the manifold; pick the
    // upward crossing closest to the centre
    constexpr int kScan = 64;
    const double half = kPi / 4.0;
    double best = NAN;
    double best_lo = 0.0, best_hi = 0.0;
    double prev_psi = centre - half;
    double prev_val = F(prev_psi);
    for (int i = 1; i <= kScan; ++i) {
        const double psi = centre - half + 2.0 * half * i / kScan;
        const double val = F(psi);
        if (prev_val <= 0.0 && val > 0.0) {
            const double mid = 0.5 * (prev_psi + psi);
            if (std::isnan(best) || std::abs(mid - centre) < std::abs(best - centre)) {
                best = mid;
                best_lo = prev_psi;
                best_hi = psi;
            }
        }
        prev_psi = psi;
        prev_val = val;
    }
    if (std::isnan(best)) {
        throw NumericError("isochronal_projection: no root in the window, state too far from the manifold",
                           std::abs(F(centre)));
    }
    double lo = best_lo, hi = best_hi;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + std::abs(centre)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) <= 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace arlab

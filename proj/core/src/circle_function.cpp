#include "arlab/circle_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<std::complex<double>> forward_modes(const std::vector<double>& samples) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> in(samples.begin(), samples.end());
    std::vector<std::complex<double>> out;
    fft.fwd(out, in);
    const auto n = static_cast<double>(samples.size());
    const std::size_t half = samples.size() / 2;
    std::vector<std::complex<double>> modes(half + 1);
    for (std::size_t k = 0; k <= half; ++k) modes[k] = out[k] / n;
    return modes;
}

// Samples of sum_{|k| < n/2} c_k e^{i k theta_m} for a real function given by c_0..c_{n/2}.
std::vector<double> synthesize(const std::vector<std::complex<double>>& modes, std::size_t n) {
    std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < modes.size() && k <= half; ++k) {
        if (n % 2 == 0 && k == half) continue;  // drop Nyquist
        spectrum[k] = modes[k] * static_cast<double>(n);
        if (k > 0) spectrum[n - k] = std::conj(modes[k]) * static_cast<double>(n);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.inv(out, spectrum);
    std::vector<double> values(n);
    for (std::size_t m = 0; m < n; ++m) values[m] = out[m].real();
    return values;
}

void require_same_grid(const CircleFunction& a, const CircleFunction& b) {
    if (a.size() != b.size()) throw ContractError("CircleFunction: grid sizes differ");
}

}  // namespace

CircleFunction::CircleFunction(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 4) throw DomainError("CircleFunction: need at least 4 samples");
    modes_ = forward_modes(samples_);
}

CircleFunction CircleFunction::sample(const std::function<double(double)>& fn, int n) {
    if (n < 4) throw DomainError("CircleFunction: need at least 4 samples");
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) values[static_cast<std::size_t>(m)] = fn(kTwoPi * m / n);
    return CircleFunction(std::move(values));
}

CircleFunction CircleFunction::sample(const TrigPolynomial& p, int n) {
    return sample([&p](double t) { return p(t); }, n);
}

double CircleFunction::spacing() const noexcept { return kTwoPi / static_cast<double>(samples_.size()); }

double CircleFunction::node(int m) const noexcept { return spacing() * m; }

double CircleFunction::integral() const noexcept { return kTwoPi * modes_[0].real(); }

bool CircleFunction::zero_mean(double tol) const noexcept {
    double scale = 1.0;
    for (double v : samples_) scale = std::max(scale, 1.0 + std::abs(v));
    return std::abs(integral()) <= tol * scale;
}

bool CircleFunction::strictly_positive() const noexcept {
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v > 0.0; });
}

double CircleFunction::operator()(double theta) const {
    const std::size_t n = samples_.size();
    const std::size_t half = n / 2;
    double sum = modes_[0].real();
    for (std::size_t k = 1; k <= half; ++k) {
        const std::complex<double> term = modes_[k] * std::polar(1.0, static_cast<double>(k) * theta);
        sum += (n % 2 == 0 && k == half) ? term.real() : 2.0 * term.real();
    }
    return sum;
}

CircleFunction CircleFunction::primitive() const {
    if (!zero_mean(1e-9)) throw ContractError("CircleFunction::primitive: function is not zero-mean");
    std::vector<std::complex<double>> modes(modes_.size(), {0.0, 0.0});
    for (std::size_t k = 1; k < modes_.size(); ++k) {
        modes[k] = modes_[k] / std::complex<double>(0.0, static_cast<double>(k));
    }
    return CircleFunction(synthesize(modes, samples_.size()));
}

CircleFunction CircleFunction::operator*(const CircleFunction& other) const {
    require_same_grid(*this, other);
    std::vector<double> out(samples_.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = samples_[m] * other.samples_[m];
    return CircleFunction(std::move(out));
}

CircleFunction CircleFunction::operator-(const CircleFunction& other) const {
    require_same_grid(*this, other);
    std::vector<double> out(samples_.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = samples_[m] - other.samples_[m];
    return CircleFunction(std::move(out));
}

double weighted_hminus1_inner(const CircleFunction& u, const CircleFunction& v,
                              const CircleFunction& w) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    if (!u.zero_mean() || !v.zero_mean()) {
        throw ContractError("weighted_hminus1_inner: arguments must be zero-mean");
    }
    if (!w.strictly_positive()) throw DomainError("weighted_hminus1_inner: weight must be > 0");

    const CircleFunction U = u.primitive();
    const CircleFunction V = v.primitive();
    const double w_total = w.integral();
    const double cu = (w * U).integral() / w_total;
    const double cv = (w * V).integral() / w_total;
    const auto ws = w.samples(), us = U.samples(), vs = V.samples();
    double sum = 0.0;
    for (std::size_t m = 0; m < ws.size(); ++m) sum += ws[m] * (us[m] - cu) * (vs[m] - cv);
    return sum * u.spacing();
}

double weighted_hminus1_norm(const CircleFunction& u, const CircleFunction& w) {
    return std::sqrt(weighted_hminus1_inner(u, u, w));
}

double tangent_pairing(const CircleFunction& v, const StationaryDensity& sd, double psi) {
    if (!v.zero_mean()) throw ContractError("tangent_pairing: argument must be zero-mean");
    const CircleFunction prim = v.primitive();
    const double at_zero = prim.samples()[0];
    const auto ps = prim.samples();
    const double h = v.spacing();
    double int_V = 0.0, int_V_over_q = 0.0, int_inv_q0 = 0.0;
    for (int m = 0; m < v.size(); ++m) {
        const double theta = v.node(m);
        const double V = ps[static_cast<std::size_t>(m)] - at_zero;  // \int_0^theta v
        int_V += V;
        int_V_over_q += V / sd.density(theta, psi);
        int_inv_q0 += 1.0 / sd.density(theta, 0.0);
    }
    return h * int_V - kTwoPi * (h * int_V_over_q) / (h * int_inv_q0);
}

std::complex<double> tangent_pairing_mode(int k, const StationaryDensity& sd, double psi) {
    if (k == 0) return {0.0, 0.0};
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double rho = sd.bessel().ratio(std::abs(k));
    return -(kTwoPi / std::complex<double>(0.0, static_cast<double>(k))) * sign * rho *
           std::polar(1.0, static_cast<double>(k) * psi);
}

double tangent_norm_squared(const StationaryDensity& sd) {
    return sd.bessel().one_minus_inv_i0_sq();
}

}  // namespace arlab

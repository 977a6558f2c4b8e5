#include "arlab/kernel.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxIterations = 200;

double fixed_point_residual(double r, double coupling) {
    return r - bessel_ratio_psi(2.0 * coupling * r);
}

}  // namespace

StationaryDensity::StationaryDensity(double K, double sigma, double r, BesselTable bessel)
    : K_(K), sigma_(sigma), r_(r), bessel_(std::move(bessel)) {}

double StationaryDensity::cosine_coefficient(int j) const {
    if (j < 0) throw DomainError("cosine_coefficient: negative index");
    if (j == 0) return 1.0 / (2.0 * kPi);
    return bessel_.ratio(j) / kPi;
}

double StationaryDensity::fourier_coefficient(int k) const {
    return bessel_.ratio(std::abs(k)) / (2.0 * kPi);
}

double StationaryDensity::density(double theta, double psi) const {
    const double x = bessel_.x();
    return std::exp(x * (std::cos(theta - psi) - 1.0)) / (2.0 * kPi * bessel_.scaled(0));
}

double StationaryDensity::density_derivative(double theta, double psi) const {
    return -bessel_.x() * std::sin(theta - psi) * density(theta, psi);
}

void StationaryDensity::require_synchronized(const char* what) const {
    if (!synchronized()) {
        throw DomainError(std::string(what) +
                          ": no synchronized manifold for K/sigma^2 <= 1 (K = " +
                          std::to_string(K_) + ")");
    }
}

double StationaryDensity::drift_factor() const {
    require_synchronized("drift_factor");
    return 1.0 / bessel_.one_minus_inv_i0_sq();
}

double StationaryDensity::amplification(int k) const {
    require_synchronized("amplification");
    return bessel_.ratio(k) / bessel_.one_minus_inv_i0_sq();
}

double StationaryDensity::critical_amplitude(int j) const {
    require_synchronized("critical_amplitude");
    if (j < 1) throw DomainError("critical_amplitude: harmonic index must be >= 1");
    return 1.0 / amplification(j);
}

StationaryDensity StationaryDensity::extended(int k_max) const {
    if (k_max <= bessel_.k_max()) return *this;
    return StationaryDensity(K_, sigma_, r_, BesselTable::compute(bessel_.x(), k_max));
}

std::string StationaryDensity::to_record() const {
    std::ostringstream out;
    out << "# K,sigma,r,I_0..I_" << bessel_.k_max() << '\n';
    out << std::setprecision(17) << K_ << ',' << sigma_ << ',' << r_;
    for (int k = 0; k <= bessel_.k_max(); ++k) out << ',' << bessel_.value(k);
    out << '\n';
    return out.str();
}

StationaryDensity StationaryDensity::from_record(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                values.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ContractError("StationaryDensity record: malformed field '" + field + "'");
            }
        }
        break;
    }
    if (values.size() < 5) throw ContractError("StationaryDensity record: too few fields");
    const double K = values[0];
    const double sigma = values[1];
    const double r = values[2];
    const int k_max = static_cast<int>(values.size()) - 4;
    const double x = 2.0 * K * r / (sigma * sigma);
    // The record caches values; the table is rebuilt from x so that ratios
    // stay exact even where the stored I_k overflowed.
    BesselTable table = BesselTable::compute(x, std::max(k_max, 1));
    if (std::isfinite(values[3]) && std::abs(values[3] - table.value(0)) > 1e-8 * table.value(0)) {
        throw ContractError("StationaryDensity record: I_0 inconsistent with K, sigma, r");
    }
    return StationaryDensity(K, sigma, r, std::move(table));
}

StationaryDensity solve_order_parameter(double K, double tol, double sigma, int k_max) {
    if (!(K > 0.0)) throw DomainError("solve_order_parameter: K must be > 0");
    if (!(tol > 0.0)) throw DomainError("solve_order_parameter: tol must be > 0");
    if (!(sigma > 0.0)) throw DomainError("solve_order_parameter: sigma must be > 0");

    const double coupling = K / (sigma * sigma);
    if (coupling <= 1.0) {
        return StationaryDensity(K, sigma, 0.0, BesselTable::compute(0.0, k_max));
    }

    // g(r) = r - Psi(2 K r): negative just above 0, positive at 1
    double hi = 1.0;
    double lo = std::min(0.5, std::sqrt(2.0 * (coupling - 1.0)));
    while (fixed_point_residual(lo, coupling) >= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw NumericError("solve_order_parameter: cannot bracket fixed point", lo);
    }
    double r = 0.5 * (lo + hi);
    double residual = fixed_point_residual(r, coupling);
    for (int it = 0; it < kMaxIterations; ++it) {
        if (residual < 0.0) lo = r; else hi = r;
        if (std::abs(residual) < tol && hi - lo < 1e3 * tol) break;

        const double slope = 1.0 - 2.0 * coupling * bessel_ratio_psi_derivative(2.0 * coupling * r);
        double next = r - residual / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == r) break;
        r = next;
        residual = fixed_point_residual(r, coupling);
        if (std::abs(residual) < tol * 1e-3) break;
        if (it + 1 == kMaxIterations) {
            throw NumericError("solve_order_parameter: iteration budget exhausted", residual);
        }
    }
    if (!(std::abs(residual) < tol)) {
        throw NumericError("solve_order_parameter: did not converge", residual);
    }
    return StationaryDensity(K, sigma, r, BesselTable::compute(2.0 * coupling * r, k_max));
}

}  // namespace arlab

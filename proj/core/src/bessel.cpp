#include "arlab/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kInitialNodes = 4096;
constexpr int kMaxNodes = 1 << 22;
constexpr double kQuadratureTol = 1e-12;

// (1/M) sum_j g(x cos t_j) with t_j = 2 pi j / M, doubled until converged.
template <class G>
double periodic_trapezoid(double x, G&& g) {
    auto rule = [&](int nodes) {
        double sum = 0.0;
        for (int j = 0; j < nodes; ++j) {
            sum += g(x * std::cos(kTwoPi * j / nodes));
        }
        return sum / nodes;
    };
    int nodes = kInitialNodes;
    double prev = rule(nodes);
    while (nodes < kMaxNodes) {
        nodes *= 2;
        const double next = rule(nodes);
        if (std::abs(next - prev) <= kQuadratureTol * std::max(std::abs(next), 1e-300)) {
            return next;
        }
        prev = next;
    }
    return prev;
}

int continued_fraction_start(int k, double x) {
    return k + 32 + static_cast<int>(x + 12.0 * std::sqrt(x + 1.0));
}

}  // namespace

double scaled_bessel_i0(double x) {
    if (x < 0.0) throw DomainError("scaled_bessel_i0: negative argument");
    if (x == 0.0) return 1.0;
    // exp(x cos t - x) never overflows
    return periodic_trapezoid(x, [x](double xc) { return std::exp(xc - x); });
}

double bessel_successive_ratio(int k, double x) {
    if (x < 0.0) throw DomainError("bessel_successive_ratio: negative argument");
    if (k < 1) throw DomainError("bessel_successive_ratio: order must be >= 1");
    if (x == 0.0) return 0.0;
    double rho = 0.0;
    for (int n = continued_fraction_start(k, x); n >= k; --n) {
        rho = 1.0 / (2.0 * n / x + rho);
    }
    return rho;
}

double bessel_ratio_psi(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_ratio_psi: x must be >= 0");
    return bessel_successive_ratio(1, x);
}

double bessel_ratio_psi_derivative(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_ratio_psi_derivative: x must be >= 0");
    if (x < 1e-6) return 0.5 - 3.0 * x * x / 16.0;
    const double psi = bessel_ratio_psi(x);
    return 1.0 - psi / x - psi * psi;
}

BesselTable BesselTable::compute(double x, int k_max) {
    if (!(x >= 0.0)) throw DomainError("BesselTable: x must be >= 0");
    if (k_max < 1) throw DomainError("BesselTable: k_max must be >= 1");

    std::vector<double> ratio(static_cast<std::size_t>(k_max) + 1, 0.0);
    ratio[0] = 1.0;
    if (x == 0.0) return BesselTable(0.0, 1.0, 0.0, std::move(ratio));

    // one backward sweep yields every successive ratio from k_max down to 1
    std::vector<double> successive(static_cast<std::size_t>(k_max) + 1, 0.0);
    double rho = 0.0;
    for (int n = continued_fraction_start(k_max, x); n >= 1; --n) {
        rho = 1.0 / (2.0 * n / x + rho);
        if (n <= k_max) successive[static_cast<std::size_t>(n)] = rho;
    }
    for (int k = 1; k <= k_max; ++k) {
        ratio[static_cast<std::size_t>(k)] = ratio[static_cast<std::size_t>(k) - 1] * successive[static_cast<std::size_t>(k)];
    }

    const double s0 = scaled_bessel_i0(x);
    double i0m1 = std::numeric_limits<double>::infinity();
    if (x <= 50.0) {
        i0m1 = periodic_trapezoid(x, [](double xc) { return std::expm1(xc); });
    } else if (x < 700.0) {
        i0m1 = s0 * std::exp(x) - 1.0;
    }
    return BesselTable(x, s0, i0m1, std::move(ratio));
}

double BesselTable::ratio(int k) const {
    if (k < 0 || k > k_max()) throw DomainError("BesselTable: order out of range");
    return ratio_[static_cast<std::size_t>(k)];
}

double BesselTable::scaled(int k) const { return scaled_i0_ * ratio(k); }

double BesselTable::value(int k) const {
    if (x_ > 700.0) return std::numeric_limits<double>::infinity();
    return scaled(k) * std::exp(x_);
}

double BesselTable::one_minus_inv_i0_sq() const noexcept {
    if (x_ <= 50.0) {
        const double i0 = 1.0 + i0m1_;
        return i0m1_ * (i0 + 1.0) / (i0 * i0);
    }
    const double inv = std::exp(-x_) / scaled_i0_;
    return 1.0 - inv * inv;
}

}  // namespace arlab

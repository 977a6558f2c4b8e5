#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite midpoint rule over [0, 2 pi).
inline double circle_integral(const std::function<double(double)>& fn, int nodes = 20000) {
    const double h = 2.0 * pi / nodes;
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) sum += fn((i + 0.5) * h);
    return sum * h;
}

/// e^{-x} I_k(x) from its defining integral.
inline double scaled_bessel(int k, double x, int nodes = 20000) {
    return circle_integral([&](double t) { return std::cos(k * t) * std::exp(x * (std::cos(t) - 1.0)); }, nodes) /
           (2.0 * pi);
}

inline double psi(double x) { return scaled_bessel(1, x) / scaled_bessel(0, x); }

/// Plain bisection for the positive root of r - Psi(2 K r) on (0, 1).
inline double order_parameter(double K) {
    double lo = 1e-9, hi = 1.0 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid - psi(2.0 * K * mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle

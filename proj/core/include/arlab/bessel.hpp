#pragma once

#include <vector>

namespace arlab {

/// Modified Bessel functions of the first kind I_k(x), k = 0..k_max, in the
/// integral normalisation I_k(x) = (1/2pi) \int cos(k t) exp(x cos t) dt.
///
/// I_0 is obtained by the periodic trapezoid rule (node count doubled from
/// 4096 until successive values agree to 1e-12). Higher orders are stored as
/// ratios I_k / I_{k-1} from the backward continued fraction, which keeps full
/// relative precision where the quadrature would return roundoff. Values are
/// kept exponentially scaled so that x ~ 10^3 does not overflow.
class BesselTable {
public:
    static constexpr int kDefaultKMax = 64;

    BesselTable() : BesselTable(compute(0.0, kDefaultKMax)) {}

    static BesselTable compute(double x, int k_max = kDefaultKMax);

    double x() const noexcept { return x_; }
    int k_max() const noexcept { return static_cast<int>(ratio_.size()) - 1; }

    /// e^{-x} I_k(x)
    double scaled(int k) const;
    /// I_k(x); +inf once e^x overflows.
    double value(int k) const;
    /// I_k(x) / I_0(x)
    double ratio(int k) const;
    /// I_0(x) - 1 without cancellation for small x.
    double i0_minus_one() const noexcept { return i0m1_; }
    /// 1 - 1/I_0(x)^2 = (I_0^2 - 1) / I_0^2
    double one_minus_inv_i0_sq() const noexcept;

private:
    BesselTable(double x, double scaled_i0, double i0m1, std::vector<double> ratio)
        : x_(x), scaled_i0_(scaled_i0), i0m1_(i0m1), ratio_(std::move(ratio)) {}

    double x_ = 0.0;
    double scaled_i0_ = 1.0;
    double i0m1_ = 0.0;
    std::vector<double> ratio_;  // ratio_[k] = I_k / I_0, ratio_[0] = 1
};

/// e^{-x} I_0(x) by the doubling trapezoid rule.
double scaled_bessel_i0(double x);

/// I_{k}(x) / I_{k-1}(x) for k >= 1 by backward continued fraction.
double bessel_successive_ratio(int k, double x);

/// Psi(x) = I_1(x)/I_0(x), the mean of cos under the von Mises law exp(x cos t).
/// Throws DomainError for x < 0.
double bessel_ratio_psi(double x);

/// dPsi/dx = 1 - Psi/x - Psi^2 (limit 1/2 at x = 0).
double bessel_ratio_psi_derivative(double x);

}  // namespace arlab

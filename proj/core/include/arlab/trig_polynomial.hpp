#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace arlab {

/// Finite real Fourier series a0 + sum_{j=1..n} (a_j cos(j t) + b_j sin(j t)).
///
/// Carries both potentials V' and effective forces f. Coefficients beyond the
/// stored degree read as zero.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    TrigPolynomial(double a0, std::vector<double> a, std::vector<double> b);

    static TrigPolynomial constant(double a0) { return TrigPolynomial(a0, {}, {}); }
    /// Least-squares (= exact trigonometric interpolation) projection of a
    /// periodic function onto degree n, using `samples` uniform nodes.
    static TrigPolynomial project(const std::function<double(double)>& fn, int degree,
                                  int samples = 0);

    int degree() const noexcept { return static_cast<int>(a_.size()); }
    double a0() const noexcept { return a0_; }
    double a(int j) const noexcept;
    double b(int j) const noexcept;
    void set(int j, double a, double b);

    /// Complex coefficient c_k of e^{i k t}: c_0 = a0, c_k = (a_k - i b_k)/2.
    std::complex<double> mode(int k) const noexcept;

    double operator()(double theta) const noexcept;
    double derivative(double theta) const noexcept;
    TrigPolynomial derivative() const;

    /// g(t) = f(t - phi)
    TrigPolynomial shifted(double phi) const;

    /// sum of |coefficients|, an upper bound of the sup norm
    double coefficient_l1() const noexcept;
    /// max |f| on a dense uniform grid
    double sup_norm(int samples = 4096) const;

    /// Drop trailing harmonics whose coefficients are exactly zero.
    TrigPolynomial trimmed() const;

    TrigPolynomial& operator+=(const TrigPolynomial& other);
    TrigPolynomial& operator*=(double s);
    friend TrigPolynomial operator+(TrigPolynomial lhs, const TrigPolynomial& rhs) { return lhs += rhs; }
    friend TrigPolynomial operator-(TrigPolynomial lhs, const TrigPolynomial& rhs) {
        TrigPolynomial neg = rhs;
        neg *= -1.0;
        return lhs += neg;
    }
    friend TrigPolynomial operator*(double s, TrigPolynomial p) { return p *= s; }

    /// Text form "a0; a1,b1; a2,b2; ..."
    std::string to_text() const;
    static TrigPolynomial from_text(std::string_view text);

    nlohmann::json to_json() const;
    static TrigPolynomial from_json(const nlohmann::json& j);

private:
    double a0_ = 0.0;
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Largest coefficient-wise difference (constant term included).
double max_coefficient_difference(const TrigPolynomial& p, const TrigPolynomial& q);

}  // namespace arlab

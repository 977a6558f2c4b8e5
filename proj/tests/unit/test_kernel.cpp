#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "arlab/circle_function.hpp"
#include "arlab/errors.hpp"
#include "arlab/kernel.hpp"
#include "oracles.hpp"

using namespace arlab;

TEST_CASE("bessel_ratio_psi matches spec values") {
    CHECK(bessel_ratio_psi(0.0) == 0.0);
    CHECK(bessel_ratio_psi(1.0) == doctest::Approx(oracle::psi(1.0)).epsilon(1e-12));
    CHECK(std::abs(bessel_ratio_psi(1e-3) - 0.5e-3) < 1e-6);
    CHECK_THROWS_AS(bessel_ratio_psi(-0.1), DomainError);
}

TEST_CASE("bessel_ratio_psi is increasing and concave") {
    double prev = bessel_ratio_psi(0.0);
    double prev_slope = INFINITY;
    for (int i = 1; i <= 400; ++i) {
        const double x = 0.05 * i;
        const double v = bessel_ratio_psi(x);
        const double slope = (v - prev) / 0.05;
        CHECK(v > prev);
        CHECK(v < 1.0);
        CHECK(slope <= prev_slope + 1e-12);
        prev = v;
        prev_slope = slope;
    }
}

TEST_CASE("bessel_ratio_psi_derivative agrees with a central difference") {
    for (double x : {0.0, 1e-4, 0.3, 2.0, 10.0, 80.0}) {
        const double h = 1e-5;
        const double fd = (bessel_ratio_psi(x + h) - bessel_ratio_psi(std::max(0.0, x - h))) / (x >= h ? 2 * h : h + x);
        CHECK(bessel_ratio_psi_derivative(x) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("BesselTable agrees with the defining integrals") {
    for (double x : {0.0, 0.5, 3.3, 12.0, 60.0}) {
        const BesselTable t = BesselTable::compute(x, 10);
        for (int k = 0; k <= 10; ++k) {
            const double ref = oracle::scaled_bessel(k, x);
            CHECK(std::abs(t.scaled(k) - ref) < 1e-10 * std::abs(ref) + 1e-15);
        }
    }
}

TEST_CASE("BesselTable invariants") {
    const BesselTable zero = BesselTable::compute(0.0, 8);
    CHECK(zero.value(0) == 1.0);
    for (int k = 1; k <= 8; ++k) CHECK(zero.value(k) == 0.0);

    for (double x : {0.01, 1.0, 7.0, 300.0, 1500.0}) {
        const BesselTable t = BesselTable::compute(x);
        if (x < 700) CHECK(t.value(0) >= 1.0);
        CHECK(t.i0_minus_one() > 0.0);
        for (int k = 1; k <= t.k_max(); ++k) {
            CHECK(t.ratio(k) >= 0.0);
            CHECK(t.ratio(k) < t.ratio(k - 1));
        }
    }
}

TEST_CASE("I_j/I_0 - 1 behaves like -j^2/(2x) for large x") {
    const double x = 1e3;
    const BesselTable t = BesselTable::compute(x, 4);
    for (int j = 1; j <= 3; ++j) {
        const double lhs = t.ratio(j) - 1.0;
        const double rhs = -double(j * j) / (2.0 * x);
        CHECK(lhs < 0.0);
        CHECK(std::abs(lhs / rhs - 1.0) < 0.1);
    }
}

TEST_CASE("solve_order_parameter on both branches") {
    CHECK(solve_order_parameter(0.5).r() == 0.0);
    CHECK(solve_order_parameter(1.0).r() == 0.0);
    CHECK_FALSE(solve_order_parameter(1.0).synchronized());

    const StationaryDensity sd = solve_order_parameter(2.0);
    CHECK(std::abs(sd.r() - bessel_ratio_psi(4.0 * sd.r())) < 1e-12);
    CHECK(sd.r() == doctest::Approx(oracle::order_parameter(2.0)).epsilon(1e-10));
    CHECK(sd.r() == doctest::Approx(0.8314620).epsilon(1e-7));

    const double eps = 1e-4;
    const double r = solve_order_parameter(1.0 + eps).r();
    CHECK(std::abs(r / std::sqrt(2.0 * eps) - 1.0) < 0.05);
}

TEST_CASE("solve_order_parameter rejects invalid arguments") {
    CHECK_THROWS_AS(solve_order_parameter(-1.0), DomainError);
    CHECK_THROWS_AS(solve_order_parameter(2.0, 0.0), DomainError);
}

TEST_CASE("sigma enters through K / sigma^2") {
    const StationaryDensity a = solve_order_parameter(8.0, 1e-13, 2.0);
    const StationaryDensity b = solve_order_parameter(2.0);
    CHECK(a.r() == doctest::Approx(b.r()).epsilon(1e-12));
    CHECK(a.coupling() == doctest::Approx(2.0));
    CHECK(solve_order_parameter(3.0, 1e-13, 2.0).r() == 0.0);
}

TEST_CASE("fixed point is unique on (0, 1)") {
    for (double K : {1.1, 1.5, 2.0, 5.0, 20.0}) {
        int changes = 0;
        double prev = 1e-6 - bessel_ratio_psi(2 * K * 1e-6);
        for (int i = 1; i <= 10000; ++i) {
            const double r = 1e-6 + (1.0 - 2e-6) * i / 10000.0;
            const double g = r - bessel_ratio_psi(2 * K * r);
            if ((g > 0) != (prev > 0)) ++changes;
            prev = g;
        }
        CHECK(changes == 1);
    }
}

TEST_CASE("q0 is a normalised, positive, even density with the stated Fourier coefficients") {
    for (double K : {0.5, 1.05, 2.0, 10.0, 60.0}) {
        const StationaryDensity sd = solve_order_parameter(K);
        const double mass = oracle::circle_integral([&](double t) { return sd.density(t); });
        CHECK(std::abs(mass - 1.0) < 1e-10);
        for (double t : {0.1, 1.0, 2.5, 3.1}) {
            CHECK(sd.density(t) > 0.0);
            CHECK(sd.density(t) == doctest::Approx(sd.density(-t)).epsilon(1e-14));
        }
        CHECK(sd.cosine_coefficient(0) == doctest::Approx(1.0 / (2 * oracle::pi)));
        for (int j = 1; j <= 4; ++j) {
            const double ref =
                oracle::circle_integral([&](double t) { return sd.density(t) * std::cos(j * t); }) / oracle::pi;
            CHECK(std::abs(sd.cosine_coefficient(j) - ref) < 1e-12);
            CHECK(sd.fourier_coefficient(j) == doctest::Approx(0.5 * sd.cosine_coefficient(j)));
            CHECK(sd.fourier_coefficient(-j) == sd.fourier_coefficient(j));
        }
    }
}

TEST_CASE("density_derivative matches a finite difference and psi translates") {
    const StationaryDensity sd = solve_order_parameter(2.0);
    for (double t : {0.2, 1.7, 4.0}) {
        const double h = 1e-6;
        CHECK(sd.density_derivative(t, 0.4) ==
              doctest::Approx((sd.density(t + h, 0.4) - sd.density(t - h, 0.4)) / (2 * h)).epsilon(1e-7));
        CHECK(sd.density(t, 0.4) == doctest::Approx(sd.density(t - 0.4)));
    }
}

TEST_CASE("drift factor, amplification and critical amplitudes") {
    const StationaryDensity sd = solve_order_parameter(2.0);
    const double I0 = sd.bessel().value(0);
    CHECK(sd.drift_factor() == doctest::Approx(I0 * I0 / (I0 * I0 - 1.0)));
    CHECK(sd.critical_amplitude(1) == doctest::Approx(1.1731362).epsilon(1e-7));
    for (int k = 1; k <= 10; ++k) {
        CHECK(sd.amplification(k) * sd.critical_amplitude(k) == doctest::Approx(1.0));
        if (k > 1) CHECK(sd.amplification(k) < sd.amplification(k - 1));
    }
    CHECK_THROWS_AS(solve_order_parameter(0.8).drift_factor(), DomainError);
    CHECK_THROWS_AS(solve_order_parameter(0.8).critical_amplitude(1), DomainError);
}

TEST_CASE("stationary record round trip") {
    const StationaryDensity sd = solve_order_parameter(3.0);
    const std::string rec = sd.to_record();
    CHECK(rec.rfind("# K,sigma,r,I_0", 0) == 0);
    const StationaryDensity back = StationaryDensity::from_record(rec);
    CHECK(back.r() == sd.r());
    CHECK(back.K() == sd.K());
    for (int k = 0; k <= 10; ++k) CHECK(back.bessel().ratio(k) == doctest::Approx(sd.bessel().ratio(k)).epsilon(1e-14));
    CHECK_THROWS(StationaryDensity::from_record("# header\n1,2,x\n"));
}

TEST_CASE("weighted H-1 inner product examples") {
    const auto c = CircleFunction::sample([](double t) { return std::cos(t); }, 256);
    const auto s = CircleFunction::sample([](double t) { return std::sin(t); }, 256);
    const auto one = CircleFunction::sample([](double) { return 1.0; }, 256);
    CHECK(weighted_hminus1_inner(c, c, one) == doctest::Approx(oracle::pi).epsilon(1e-12));
    CHECK(std::abs(weighted_hminus1_inner(c, s, one)) < 1e-12);
    CHECK(weighted_hminus1_inner(c, s, one) == doctest::Approx(weighted_hminus1_inner(s, c, one)).scale(1.0));

    const auto shifted = CircleFunction::sample([](double t) { return 1.0 + std::cos(t); }, 256);
    CHECK_THROWS_AS(weighted_hminus1_inner(shifted, c, one), ContractError);
    const auto bad = CircleFunction::sample([](double t) { return std::cos(t); }, 256);
    CHECK_THROWS_AS(weighted_hminus1_inner(c, c, bad), DomainError);
}

TEST_CASE("weighted H-1 pairing with q' agrees with the closed forms") {
    // the centred primitives cancel against weights of size e^{2x}, which
    // costs digits in the general route at large K
    for (double K : {1.3, 2.0, 6.0}) {
        const double tol = K < 3.0 ? 1e-10 : 1e-7;
        const StationaryDensity sd = solve_order_parameter(K);
        const int n = 512;
        for (double psi : {0.0, 0.9}) {
            const auto q = CircleFunction::sample([&](double t) { return sd.density(t, psi); }, n);
            const auto inv_q = CircleFunction::sample([&](double t) { return 1.0 / sd.density(t, psi); }, n);
            const auto dq = CircleFunction::sample([&](double t) { return sd.density_derivative(t, psi); }, n);
            const auto v = CircleFunction::sample([](double t) { return std::sin(t); }, n);

            const double general = weighted_hminus1_inner(v, dq, inv_q);
            CHECK(std::abs(general - tangent_pairing(v, sd, psi)) < tol * std::abs(general));
            // sin = (e^{i t} - e^{-i t}) / (2 i)
            const std::complex<double> l1 = tangent_pairing_mode(1, sd, psi);
            const double fourier = ((l1 - std::conj(l1)) / std::complex<double>(0.0, 2.0)).real();
            CHECK(std::abs(general - fourier) < tol * std::abs(general));

            CHECK(std::abs(weighted_hminus1_inner(dq, dq, inv_q) - tangent_norm_squared(sd)) < tol);
        }
    }
}

TEST_CASE("H-1 norm equivalence between weights 1/q0 and 1") {
    const StationaryDensity sd = solve_order_parameter(2.5);
    const int n = 256;
    const auto w1 = CircleFunction::sample([&](double t) { return 1.0 / sd.density(t); }, n);
    const auto w2 = CircleFunction::sample([](double) { return 1.0; }, n);
    double max_ratio = 0.0;
    for (double s : w1.samples()) max_ratio = std::max(max_ratio, s);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(6), b(6);
        for (int j = 0; j < 6; ++j) {
            a[j] = g(rng) / (j + 1);
            b[j] = g(rng) / (j + 1);
        }
        const auto u = CircleFunction::sample(TrigPolynomial(0.0, a, b), n);
        CHECK(weighted_hminus1_norm(u, w1) <= std::sqrt(max_ratio) * weighted_hminus1_norm(u, w2) * (1 + 1e-12));
    }
}

TEST_CASE("CircleFunction basics") {
    const TrigPolynomial p(0.5, {1.0, -0.3}, {0.2, 0.7});
    const auto u = CircleFunction::sample(p, 64);
    CHECK(u.integral() == doctest::Approx(oracle::pi));
    CHECK(u(1.234) == doctest::Approx(p(1.234)).epsilon(1e-12));
    CHECK_FALSE(u.zero_mean());
    CHECK_FALSE(u.strictly_positive());
    CHECK(CircleFunction::sample([](double t) { return 2.0 + std::cos(t); }, 16).strictly_positive());

    const auto z = CircleFunction::sample(TrigPolynomial(0.0, {1.0, 0.0}, {0.0, 2.0}), 64);
    const auto U = z.primitive();
    // primitive of cos t + 2 sin 2t is sin t - cos 2t
    CHECK(U(0.8) == doctest::Approx(std::sin(0.8) - std::cos(1.6)).epsilon(1e-12));
    CHECK_THROWS_AS(u.primitive(), ContractError);
}

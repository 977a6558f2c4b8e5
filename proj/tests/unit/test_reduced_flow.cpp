#include <doctest.h>

#include <cmath>
#include <random>

#include "arlab/errors.hpp"
#include "arlab/potential.hpp"
#include "arlab/reduced_flow.hpp"
#include "oracles.hpp"

using namespace arlab;

namespace {

TrigPolynomial one_plus_sine(double amp, int j = 1) {
    TrigPolynomial p = TrigPolynomial::constant(1.0);
    p.set(j, 0.0, amp);
    return p;
}

// Brute-force explicit Euler with a tiny step: time to travel 2 pi.
double euler_winding_time(const TrigPolynomial& f, double dt) {
    double psi = 0.0, t = 0.0;
    while (std::abs(psi) < 2 * oracle::pi) {
        psi -= dt * f(psi);
        t += dt;
    }
    return t;
}

double wrap(double x) {
    x = std::fmod(x, 2 * oracle::pi);
    return x < 0 ? x + 2 * oracle::pi : x;
}

double circle_gap(double a, double b) {
    const double d = std::abs(wrap(a) - wrap(b));
    return std::min(d, 2 * oracle::pi - d);
}

}  // namespace

TEST_CASE("classify examples") {
    const FlowClassification c = classify(one_plus_sine(0.5));
    CHECK(c.kind == FlowKind::periodic);
    CHECK(c.period == doctest::Approx(2 * oracle::pi / std::sqrt(0.75)).epsilon(1e-12));
    CHECK(c.period == doctest::Approx(7.2552).epsilon(1e-4));
    CHECK(c.period == doctest::Approx(euler_winding_time(one_plus_sine(0.5), 1e-5)).epsilon(1e-4));

    const FlowClassification two = classify(one_plus_sine(2.0));
    REQUIRE(two.kind == FlowKind::fixed_points);
    REQUIRE(two.fixed_points.size() == 2);
    CHECK(two.fixed_points[0].stable != two.fixed_points[1].stable);
    for (const auto& fp : two.fixed_points) {
        CHECK(std::abs(one_plus_sine(2.0)(fp.psi)) < 1e-11);
        CHECK(fp.stable == (fp.slope > 0.0));
    }

    const FlowClassification rot = classify(TrigPolynomial::constant(1.0));
    CHECK(rot.kind == FlowKind::periodic);
    CHECK(rot.period == doctest::Approx(2 * oracle::pi));
}

TEST_CASE("stability labels agree with trajectories") {
    for (const TrigPolynomial& f : {one_plus_sine(2.0), TrigPolynomial(0.2, {1.0, 0.5}, {-0.3, 1.2}), one_plus_sine(3.0, 2)}) {
        const FlowClassification c = classify(f);
        REQUIRE(c.kind == FlowKind::fixed_points);
        CHECK(c.fixed_points.size() % 2 == 0);
        for (std::size_t i = 0; i < c.fixed_points.size(); ++i) {
            const auto& fp = c.fixed_points[i];
            CHECK(fp.stable != c.fixed_points[(i + 1) % c.fixed_points.size()].stable);
            for (double offset : {-1e-3, 1e-3}) {
                const PhaseTrajectory tr = integrate_phase(f, fp.psi + offset, 200.0, 0.01, 1000);
                const double dist = circle_gap(tr.psi.back(), fp.psi);
                if (fp.stable) CHECK(dist < 1e-6);
                else CHECK(dist > 1e-2);
            }
        }
    }
}

TEST_CASE("degenerate zeros are reported, not misclassified") {
    CHECK(classify(one_plus_sine(1.0)).kind == FlowKind::degenerate);
    CHECK(classify(one_plus_sine(1.0 + 1e-3)).kind == FlowKind::fixed_points);
    CHECK(classify(one_plus_sine(1.0 - 1e-3)).kind == FlowKind::periodic);
}

TEST_CASE("classification JSON layout") {
    const nlohmann::json p = classify(one_plus_sine(0.5)).to_json();
    CHECK(p.at("kind") == "periodic");
    CHECK(p.at("period").get<double>() > 0.0);
    CHECK(p.at("fixed_points").empty());
    const nlohmann::json q = classify(one_plus_sine(2.0)).to_json();
    CHECK(q.at("kind") == "fixed_points");
    CHECK(q.at("period").is_null());
    CHECK(q.at("fixed_points").size() == 2);
    CHECK(q.at("fixed_points")[0].contains("psi"));
    CHECK(q.at("fixed_points")[0].contains("stable"));
}

TEST_CASE("classification is rotation equivariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2 * oracle::pi);
    const TrigPolynomial periodic(1.0, {0.3, 0.2}, {0.4, -0.1});
    const TrigPolynomial fixed(0.3, {1.0, 0.5}, {-0.3, 1.2});
    for (int trial = 0; trial < 10; ++trial) {
        const double phi = u(rng);
        const auto a = classify(periodic), b = classify(periodic.shifted(phi));
        CHECK(b.kind == a.kind);
        CHECK(b.period == doctest::Approx(a.period).epsilon(1e-10));
        const auto c = classify(fixed), d = classify(fixed.shifted(phi));
        REQUIRE(c.fixed_points.size() == d.fixed_points.size());
        for (const auto& fp : c.fixed_points) {
            bool found = false;
            for (const auto& gp : d.fixed_points) {
                if (circle_gap(gp.psi, fp.psi + phi) < 1e-9 && gp.stable == fp.stable) found = true;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("period_first_harmonic") {
    CHECK(std::abs(period_first_harmonic(1.1, 2.0) - 18.0779) < 1e-3);
    CHECK(period_first_harmonic(0.0, 3.0) == doctest::Approx(2 * oracle::pi));
    for (double a : {0.2, 0.9, 1.1}) {
        const StationaryDensity sd = solve_order_parameter(2.0);
        const TrigPolynomial f = effective_force_coeff(one_plus_sine(a), sd).f;
        CHECK(std::abs(period_first_harmonic(a, 2.0) - classify(f).period) < 1e-8);
    }
    CHECK_THROWS_AS(period_first_harmonic(1.2, 2.0), DomainError);
    CHECK_THROWS_AS(period_first_harmonic(0.5, 0.9), DomainError);
    CHECK_THROWS_AS(period_of(one_plus_sine(2.0)), DomainError);
}

TEST_CASE("integrate_phase examples") {
    const PhaseTrajectory tr = integrate_phase(TrigPolynomial::constant(1.0), 0.0, oracle::pi, 1e-3);
    CHECK(tr.psi.back() == doctest::Approx(-oracle::pi).epsilon(1e-12));
    CHECK(tr.t.back() == doctest::Approx(oracle::pi));

    const TrigPolynomial f = one_plus_sine(2.0);
    const FlowClassification c = classify(f);
    double stable = 0.0;
    for (const auto& fp : c.fixed_points) if (fp.stable) stable = fp.psi;
    for (double psi0 : {0.0, 1.0, 2.0, 4.0, 6.0}) {
        const PhaseTrajectory t2 = integrate_phase(f, psi0, 100.0, 0.01, 100);
        CHECK(circle_gap(t2.psi.back(), stable) < 1e-8);
    }

    const StationaryDensity sd = solve_order_parameter(2.0);
    const TrigPolynomial g = effective_force_coeff(one_plus_sine(1.1), sd).f;
    CHECK(std::abs(winding_time(g, 0.0, 0.01) - 18.0779) < 1e-3);
}

TEST_CASE("quadrature period equals winding time to O(dt^4)") {
    for (const TrigPolynomial& f : {one_plus_sine(0.9), TrigPolynomial(-1.0, {0.2, 0.1}, {0.5, 0.3})}) {
        const double T = classify(f).period;
        for (double dt : {0.05, 0.02}) {
            CHECK(std::abs(winding_time(f, 0.3, dt) - T) <= 10 * std::pow(dt, 4) * (T / dt));
        }
    }
}

TEST_CASE("critical_amplitude") {
    const double tau = 18.0779;
    const double inverted = 1.1 / std::sqrt(1.0 - std::pow(2 * oracle::pi / tau, 2));
    CHECK(std::abs(critical_amplitude(1, 2.0) - inverted) < 1e-3);
    CHECK_THROWS_AS(critical_amplitude(1, 1.0), DomainError);
    CHECK_THROWS_AS(critical_amplitude(0, 2.0), DomainError);
    // closed-form asymptotes of (I_0^2 - 1)/(I_0 I_1)
    CHECK((critical_amplitude(1, 400.0) - 1.0) * 4 * 400 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(critical_amplitude(1, 1.00001) / std::sqrt(8e-5) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("j = 2 critical curve saturates below 4") {
    for (int i = 0; i <= 400; ++i) {
        const double K = 1.0 + std::pow(10.0, -6.0 + 7.0 * i / 400.0);
        CHECK(critical_amplitude(2, K) < 4.0);
    }
    CHECK(critical_amplitude(2, 1.0 + 1e-6) > 3.99);
}

TEST_CASE("j >= 3 critical curves diverge as K decreases to 1") {
    for (int j : {3, 4}) {
        const double a = critical_amplitude(j, 1.1), b = critical_amplitude(j, 1.01), c = critical_amplitude(j, 1.001);
        CHECK(a < b);
        CHECK(b < c);
        CHECK(c > 10 * a);
    }
}

TEST_CASE("transition_points") {
    const auto mixed = [](double a) {
        TrigPolynomial p = TrigPolynomial::constant(1.0);
        p.set(1, 0.0, a);
        p.set(2, 0.0, 2 * a);
        return p;
    };
    const TransitionScan s = transition_points(mixed, 2.0, {0.1, 3.0});
    REQUIRE(s.points.size() == 2);
    CHECK(std::abs(s.points[0] - 0.600) < 1e-2);
    CHECK(std::abs(s.points[1] - 2.107) < 1e-2);
    CHECK(s.unresolved.empty());

    const auto first = [](double a) { return one_plus_sine(a); };
    const TransitionScan one = transition_points(first, 2.0, {0.0, 3.0});
    REQUIRE(one.points.size() == 1);
    CHECK(std::abs(one.points[0] - critical_amplitude(1, 2.0)) < 1e-6);

    CHECK(transition_points(first, 2.0, {0.0, 1.1}).points.empty());

    // a family that is degenerate on a whole stretch
    const double ac = critical_amplitude(1, 2.0);
    const auto flat = [ac](double s) { return s < 1.0 ? one_plus_sine(ac) : one_plus_sine(0.5); };
    CHECK_FALSE(transition_points(flat, 2.0, {0.0, 2.0}, 40).unresolved.empty());
}

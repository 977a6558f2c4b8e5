#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "arlab/errors.hpp"
#include "arlab/reduced_flow.hpp"
#include "arlab/scan.hpp"
#include "oracles.hpp"

using namespace arlab;

namespace {

// (I0^2 - 1) / (I0 I1) at x = 2 K r, written with scaled Bessel values
double oracle_a_c(double K) {
    const double x = 2.0 * K * oracle::order_parameter(K);
    const double i0 = oracle::scaled_bessel(0, x), i1 = oracle::scaled_bessel(1, x);
    return (i0 * i0 - std::exp(-2.0 * x)) / (i0 * i1);
}

}  // namespace

TEST_CASE("coupling roots for a = 1.1 straddle K = 2") {
    const CouplingRoots r = coupling_roots(1.1);
    REQUIRE(r.count == 2);
    CHECK(r.K_minus < 2.0);
    CHECK(r.K_plus > 2.0);
    CHECK(r.K_minus > 1.0);
    CHECK(oracle_a_c(r.K_minus) == doctest::Approx(1.1).epsilon(1e-8));
    CHECK(oracle_a_c(r.K_plus) == doctest::Approx(1.1).epsilon(1e-8));
}

TEST_CASE("coupling roots below one and above the maximum") {
    for (double a : {0.3, 0.8, 1.0}) {
        const CouplingRoots r = coupling_roots(a);
        REQUIRE(r.count == 1);
        CHECK(critical_amplitude(1, r.K_minus) == doctest::Approx(a).epsilon(1e-9));
    }
    const CriticalMaximum m = max_critical_amplitude();
    CHECK(coupling_roots(m.a_hat + 1e-3).count == 0);
    CHECK(coupling_roots(0.0).count == 0);
    CHECK(coupling_roots(-1.0).count == 0);
    CHECK(coupling_roots(m.a_hat - 1e-3).count == 2);
}

TEST_CASE("maximum of the critical amplitude") {
    const CriticalMaximum m = max_critical_amplitude();
    CHECK(m.a_hat > 1.0);
    CHECK(m.a_hat == doctest::Approx(1.18754).epsilon(1e-5));
    CHECK(m.K_star == doctest::Approx(1.6963).epsilon(1e-3));
    CHECK(oracle_a_c(m.K_star) == doctest::Approx(m.a_hat).epsilon(1e-9));
    for (int i = 1; i <= 1000; ++i) {
        const double K = 1.0 + 49.0 * i / 1000.0;
        CHECK(critical_amplitude(1, K) <= m.a_hat + 1e-12);
    }
}

TEST_CASE("critical curve follows the closed form") {
    const CriticalCurve c = critical_curve(1, {"K", 1.2, 6.0, 9});
    REQUIRE(c.samples.size() == 9);
    for (const auto& [K, a] : c.samples) CHECK(a == doctest::Approx(oracle_a_c(K)).epsilon(1e-9));
}

TEST_CASE("first-harmonic diagram agrees with the critical curve") {
    const PhaseDiagram d = scan_first_harmonic({1.05, 5.0}, {0.0, 2.0}, 12, 41);
    REQUIRE(d.cells.size() == 12u * 41u);
    REQUIRE(d.curves.size() == 1);
    for (int iK = 0; iK < 12; ++iK) {
        const double ac = d.curves[0].samples[static_cast<std::size_t>(iK)].second;
        for (int ia = 0; ia < 41; ++ia) {
            const PhaseCell& c = d.cell(iK, ia);
            CHECK(c.K == doctest::Approx(d.K_axis.value(iK)));
            if (c.a < ac - 1e-6) CHECK(c.kind == FlowKind::periodic);
            if (c.a > ac + 1e-6) CHECK(c.kind == FlowKind::fixed_points);
        }
    }
    for (int iK = 0; iK < 12; ++iK) CHECK(d.cell(iK, 10).kind == FlowKind::periodic);  // a = 0.5
}

TEST_CASE("higher harmonics") {
    const PhaseDiagram two = scan_harmonic_j(2, {1.01, 8.0}, {5.0, 5.0}, 15, 1);
    for (const auto& c : two.cells) CHECK(c.kind == FlowKind::fixed_points);

    const double a3 = critical_amplitude(3, 1.0005);
    CHECK(a3 > 100.0);
    const PhaseDiagram three = scan_harmonic_j(3, {1.0005, 1.0005}, {100.0, 100.0}, 1, 1);
    CHECK(three.cells[0].kind == FlowKind::periodic);
    const PhaseDiagram three_far = scan_harmonic_j(3, {3.0, 3.0}, {100.0, 100.0}, 1, 1);
    CHECK(three_far.cells[0].kind == FlowKind::fixed_points);

    CHECK_THROWS_AS(scan_harmonic_j(2, {0.5, 2.0}, {0.0, 1.0}, 3, 3), DomainError);
    CHECK_THROWS_AS(scan_harmonic_j(2, {1.5, 2.0}, {0.0, 1.0}, 0, 3), DomainError);
}

TEST_CASE("scans are deterministic") {
    const PhaseDiagram a = scan_first_harmonic({1.1, 3.0}, {0.5, 1.5}, 9, 17);
    const PhaseDiagram b = scan_first_harmonic({1.1, 3.0}, {0.5, 1.5}, 9, 17);
    std::ostringstream sa, sb, ca, cb;
    a.write_cells_csv(sa);
    b.write_cells_csv(sb);
    a.write_curve_csv(ca);
    b.write_curve_csv(cb);
    CHECK(sa.str() == sb.str());
    CHECK(ca.str() == cb.str());
    CHECK(sa.str().rfind("K,a,kind\n", 0) == 0);
    CHECK(ca.str().rfind("K,a_c_1\n", 0) == 0);
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    parallel_for(0, [](std::size_t) { FAIL("called on empty range"); });
}

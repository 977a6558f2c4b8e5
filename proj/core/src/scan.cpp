#include "arlab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "arlab/errors.hpp"
#include "arlab/potential.hpp"

namespace arlab {
namespace {

void require_axis(const GridAxis& axis) {
    if (axis.count < 1) throw DomainError("scan: grid axis '" + axis.name + "' needs at least one point");
    if (!(axis.hi >= axis.lo)) throw DomainError("scan: grid axis '" + axis.name + "' is reversed");
}

PhaseDiagram scan_harmonic(int j, Interval K_range, Interval a_range, int nK, int na) {
    PhaseDiagram d;
    d.j = j;
    d.K_axis = {"K", K_range.lo, K_range.hi, nK};
    d.a_axis = {"a", a_range.lo, a_range.hi, na};
    require_axis(d.K_axis);
    require_axis(d.a_axis);
    if (!(K_range.lo > 1.0)) throw DomainError("scan: K range must lie in (1, inf)");

    std::vector<StationaryDensity> profiles;
    profiles.reserve(static_cast<std::size_t>(nK));
    for (int i = 0; i < nK; ++i) profiles.push_back(solve_order_parameter(d.K_axis.value(i)));

    d.cells.resize(static_cast<std::size_t>(nK) * static_cast<std::size_t>(na));
    parallel_for(d.cells.size(), [&](std::size_t idx) {
        const int iK = static_cast<int>(idx / static_cast<std::size_t>(na));
        const int ia = static_cast<int>(idx % static_cast<std::size_t>(na));
        const double a = d.a_axis.value(ia);
        TrigPolynomial v_prime = TrigPolynomial::constant(1.0);
        v_prime.set(j, 0.0, a);
        const FlowClassification c = classify(effective_force_coeff(v_prime, profiles[static_cast<std::size_t>(iK)]).f);
        d.cells[idx] = {d.K_axis.value(iK), a, c.kind};
    });
    d.curves.push_back(critical_curve(j, d.K_axis));
    return d;
}

double a_c(double K) { return solve_order_parameter(K).critical_amplitude(1); }

double bisect(const std::function<double(double)>& g, double lo, double hi, double tol) {
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void PhaseDiagram::write_cells_csv(std::ostream& os) const {
    os.precision(17);
    os << "K,a,kind\n";
    for (const auto& c : cells) os << c.K << ',' << c.a << ',' << to_string(c.kind) << '\n';
}

void PhaseDiagram::write_curve_csv(std::ostream& os) const {
    os.precision(17);
    os << "K,a_c_" << j << '\n';
    for (const auto& curve : curves) {
        for (const auto& [K, a] : curve.samples) os << K << ',' << a << '\n';
    }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
#if defined(ARLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

CriticalCurve critical_curve(int j, const GridAxis& K_axis) {
    if (j < 1) throw DomainError("critical_curve: j must be >= 1");
    require_axis(K_axis);
    if (!(K_axis.lo > 1.0)) throw DomainError("critical_curve: K must be > 1");
    CriticalCurve curve;
    curve.j = j;
    curve.samples.resize(static_cast<std::size_t>(K_axis.count));
    parallel_for(curve.samples.size(), [&](std::size_t i) {
        const double K = K_axis.value(static_cast<int>(i));
        curve.samples[i] = {K, critical_amplitude(j, K)};
    });
    return curve;
}

PhaseDiagram scan_first_harmonic(Interval K_range, Interval a_range, int nK, int na) {
    return scan_harmonic(1, K_range, a_range, nK, na);
}

PhaseDiagram scan_harmonic_j(int j, Interval K_range, Interval a_range, int nK, int na) {
    if (j < 2) throw DomainError("scan_harmonic_j: j must be >= 2");
    return scan_harmonic(j, K_range, a_range, nK, na);
}

CriticalMaximum max_critical_amplitude(double K_max, int coarse) {
    if (!(K_max > 1.0) || coarse < 3) throw DomainError("max_critical_amplitude: need K_max > 1 and >= 3 samples");
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double upper = attempt == 0 ? K_max : 4.0 * K_max;
        // geometric spacing in K - 1 resolves the steep rise near K = 1
        const double lo = std::log(1e-6), hi = std::log(upper - 1.0);
        auto K_at = [&](int i) { return 1.0 + std::exp(lo + (hi - lo) * i / (coarse - 1)); };
        std::vector<double> values(static_cast<std::size_t>(coarse));
        parallel_for(values.size(), [&](std::size_t i) { values[i] = a_c(K_at(static_cast<int>(i))); });
        const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
        if (best == coarse - 1) continue;
        double a = K_at(std::max(0, best - 1)), b = K_at(best + 1);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = a_c(c), fd = a_c(d);
        while (b - a > 1e-10 * b) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = a_c(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = a_c(d);
            }
        }
        CriticalMaximum out;
        out.K_star = 0.5 * (a + b);
        out.a_hat = a_c(out.K_star);
        if (!(out.a_hat > 1.0)) throw NumericError("max_critical_amplitude: maximum does not exceed 1", out.a_hat);
        return out;
    }
    throw NumericError("max_critical_amplitude: maximum sits on the range boundary", 4.0 * K_max);
}

CouplingRoots coupling_roots(double a, double tol) {
    CouplingRoots out;
    if (!(a > 0.0)) return out;
    const CriticalMaximum peak = max_critical_amplitude();
    if (a >= peak.a_hat) return out;
    auto g = [a](double K) { return a_c(K) - a; };

    const double lo = 1.0 + 1e-10;
    if (g(lo) > 0.0) throw NumericError("coupling_roots: lower root below K - 1 = 1e-10", g(lo));
    out.K_minus = bisect(g, lo, peak.K_star, tol);
    out.count = 1;
    if (a <= 1.0) return out;

    double hi = 2.0 * peak.K_star;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e9) throw NumericError("coupling_roots: upper root not bracketed", g(hi));
    }
    out.K_plus = bisect(g, peak.K_star, hi, tol);
    out.count = 2;
    return out;
}

}  // namespace arlab

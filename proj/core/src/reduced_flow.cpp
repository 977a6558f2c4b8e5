#include "arlab/reduced_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "arlab/errors.hpp"
#include "arlab/potential.hpp"

namespace arlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kScanPoints = 2048;
constexpr double kRootTol = 1e-12;

double wrap(double psi) {
    double w = std::fmod(psi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

double bisect_root(const TrigPolynomial& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > kRootTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimisation of f^2 on [lo, hi].
double minimise_square(const TrigPolynomial& f, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1) * f(x1), f2 = f(x2) * f(x2);
    for (int it = 0; it < 200 && hi - lo > kRootTol; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - g * (hi - lo); f1 = f(x1) * f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + g * (hi - lo); f2 = f(x2) * f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

struct Signature {
    FlowKind kind;
    std::size_t zeros;
    bool operator==(const Signature&) const = default;
};

Signature signature_of(const FlowClassification& c) { return {c.kind, c.fixed_points.size()}; }

}  // namespace

std::string to_string(FlowKind kind) {
    switch (kind) {
        case FlowKind::periodic: return "periodic";
        case FlowKind::fixed_points: return "fixed_points";
        case FlowKind::degenerate: return "degenerate";
    }
    return "unknown";
}

nlohmann::json FlowClassification::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["period"] = kind == FlowKind::periodic ? nlohmann::json(period) : nlohmann::json(nullptr);
    j["fixed_points"] = nlohmann::json::array();
    for (const auto& fp : fixed_points) {
        j["fixed_points"].push_back({{"psi", fp.psi}, {"stable", fp.stable}});
    }
    return j;
}

FlowClassification classify(const TrigPolynomial& f, double tol) {
    if (!(tol > 0.0)) throw DomainError("classify: tol must be > 0");
    if (f.coefficient_l1() == 0.0) throw DomainError("classify: f is identically zero");

    const double h = kTwoPi / kScanPoints;
    std::vector<double> values(kScanPoints);
    for (int m = 0; m < kScanPoints; ++m) values[static_cast<std::size_t>(m)] = f(m * h);

    FlowClassification out;
    std::vector<double> roots;
    for (int m = 0; m < kScanPoints; ++m) {
        const double lo = m * h, hi = (m + 1) * h;
        const double flo = values[static_cast<std::size_t>(m)];
        const double fhi = values[static_cast<std::size_t>((m + 1) % kScanPoints)];
        if (flo == 0.0) {
            roots.push_back(lo);
        } else if (fhi != 0.0 && (flo < 0.0) != (fhi < 0.0)) {
            roots.push_back(bisect_root(f, lo, hi));
        }
    }

    bool degenerate = false;
    // touching zeros produce no sign change; look for near-vanishing local minima of |f|
    const double scale = f.coefficient_l1();
    for (int m = 0; m < kScanPoints; ++m) {
        const double prev = std::abs(values[static_cast<std::size_t>((m + kScanPoints - 1) % kScanPoints)]);
        const double here = std::abs(values[static_cast<std::size_t>(m)]);
        const double next = std::abs(values[static_cast<std::size_t>((m + 1) % kScanPoints)]);
        if (here > prev || here > next || here == 0.0) continue;
        const double at = minimise_square(f, (m - 1) * h, (m + 1) * h);
        const bool sign_change_nearby = std::any_of(roots.begin(), roots.end(), [&](double r) {
            const double d = std::abs(wrap(r - at + std::numbers::pi) - std::numbers::pi);
            return d < 2.0 * h;
        });
        if (!sign_change_nearby && std::abs(f(at)) < 1e-9 * scale) {
            roots.push_back(wrap(at));
            degenerate = true;
        }
    }

    for (double r : roots) {
        const double slope = f.derivative(r);
        if (std::abs(slope) < tol) degenerate = true;
        out.fixed_points.push_back({wrap(r), slope > 0.0, slope});
    }
    std::sort(out.fixed_points.begin(), out.fixed_points.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.psi < b.psi; });

    if (degenerate) {
        out.kind = FlowKind::degenerate;
    } else if (out.fixed_points.empty()) {
        try {
            out.period = period_of(f);
            out.kind = FlowKind::periodic;
        } catch (const NumericError&) {
            // bottleneck too narrow to resolve: treat as a saddle-node
            out.kind = FlowKind::degenerate;
        }
    } else {
        out.kind = FlowKind::fixed_points;
    }
    return out;
}

double period_of(const TrigPolynomial& f) {
    {
        const double h = kTwoPi / kScanPoints;
        const double first = f(0.0);
        for (int m = 0; m <= kScanPoints; ++m) {
            const double v = f(m * h);
            if (v == 0.0 || (v < 0.0) != (first < 0.0)) throw DomainError("period_of: f vanishes on the circle");
        }
    }
    auto midpoint = [&f](int n) {
        const double h = kTwoPi / n;
        double sum = 0.0, carry = 0.0;  // Neumaier summation
        for (int m = 0; m < n; ++m) {
            const double v = f((m + 0.5) * h);
            if (v == 0.0) throw DomainError("period_of: f vanishes on the circle");
            const double term = 1.0 / std::abs(v);
            const double t = sum + term;
            carry += std::abs(sum) >= term ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
        return (sum + carry) * h;
    };
    int n = 1024;
    double prev = midpoint(n);
    while (n < (1 << 24)) {
        n *= 2;
        const double next = midpoint(n);
        if (std::abs(next - prev) <= 1e-12 * next) return next;
        prev = next;
    }
    throw NumericError("period_of: quadrature did not converge (f nearly vanishes)", prev);
}

double period_first_harmonic(double a, const StationaryDensity& sd) {
    if (!sd.synchronized()) throw DomainError("period_first_harmonic: K must be > 1");
    if (!(a >= 0.0)) throw DomainError("period_first_harmonic: a must be >= 0");
    const double ac = sd.critical_amplitude(1);
    if (a >= ac) {
        throw DomainError("period_first_harmonic: a = " + std::to_string(a) +
                          " >= a_c(K) = " + std::to_string(ac) + ", no periodic orbit");
    }
    const double ratio = a / ac;
    return kTwoPi / std::sqrt(1.0 - ratio * ratio);
}

double period_first_harmonic(double a, double K) {
    if (!(K > 1.0)) throw DomainError("period_first_harmonic: K must be > 1");
    return period_first_harmonic(a, solve_order_parameter(K));
}

double critical_amplitude(int j, double K) {
    if (!(K > 1.0)) throw DomainError("critical_amplitude: K must be > 1");
    if (j < 1) throw DomainError("critical_amplitude: j must be >= 1");
    return solve_order_parameter(K, 1e-13, 1.0, std::max(j, BesselTable::kDefaultKMax)).critical_amplitude(j);
}

namespace {

double rk4_step(const TrigPolynomial& f, double psi, double dt) {
    const double k1 = -f(psi);
    const double k2 = -f(psi + 0.5 * dt * k1);
    const double k3 = -f(psi + 0.5 * dt * k2);
    const double k4 = -f(psi + dt * k3);
    return psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

PhaseTrajectory integrate_phase(const TrigPolynomial& f, double psi0, double t_end, double dt,
                                int stride) {
    if (!(dt > 0.0)) throw DomainError("integrate_phase: dt must be > 0");
    if (stride < 1) throw DomainError("integrate_phase: stride must be >= 1");
    PhaseTrajectory out;
    const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    out.t.reserve(static_cast<std::size_t>(steps / stride + 2));
    out.psi.reserve(out.t.capacity());
    double psi = psi0;
    out.t.push_back(0.0);
    out.psi.push_back(psi);
    for (long long n = 1; n <= steps; ++n) {
        const double h = (n == steps) ? t_end - (n - 1) * dt : dt;
        psi = rk4_step(f, psi, h);
        if (n % stride == 0 || n == steps) {
            out.t.push_back(n == steps ? t_end : n * dt);
            out.psi.push_back(psi);
        }
    }
    return out;
}

double winding_time(const TrigPolynomial& f, double psi0, double dt, double max_time) {
    if (!(dt > 0.0)) throw DomainError("winding_time: dt must be > 0");
    const double direction = f(psi0) > 0.0 ? -1.0 : 1.0;  // psi' = -f
    const double target = psi0 + direction * kTwoPi;
    double psi = psi0;
    double t = 0.0;
    while (t < max_time) {
        const double next = rk4_step(f, psi, dt);
        if ((next - target) * direction >= 0.0) {
            // cubic Hermite on [t, t + dt] using psi' = -f at both ends
            const double d0 = -f(psi) * dt, d1 = -f(next) * dt;
            auto hermite = [&](double s) {
                const double s2 = s * s, s3 = s2 * s;
                return (2 * s3 - 3 * s2 + 1) * psi + (s3 - 2 * s2 + s) * d0 +
                       (-2 * s3 + 3 * s2) * next + (s3 - s2) * d1;
            };
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((hermite(mid) - target) * direction >= 0.0) hi = mid; else lo = mid;
            }
            return t + 0.5 * (lo + hi) * dt;
        }
        psi = next;
        t += dt;
    }
    throw NumericError("winding_time: phase did not complete a turn", std::abs(psi - psi0));
}

TransitionScan transition_points(const std::function<TrigPolynomial(double)>& family, double K,
                                 Interval range, int samples, double tol) {
    if (!(range.hi > range.lo)) throw DomainError("transition_points: empty parameter range");
    if (samples < 2) throw DomainError("transition_points: need at least 2 samples");
    const StationaryDensity sd = solve_order_parameter(K);
    if (!sd.synchronized()) throw DomainError("transition_points: K must be > 1");

    auto signature = [&](double s) {
        return signature_of(classify(effective_force_coeff(family(s), sd).f));
    };

    TransitionScan out;
    const double step = (range.hi - range.lo) / samples;
    double prev_s = range.lo;
    Signature prev = signature(prev_s);
    double degenerate_from = prev.kind == FlowKind::degenerate ? prev_s : std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= samples; ++i) {
        const double s = range.lo + i * step;
        const Signature here = signature(s);
        if (here.kind == FlowKind::degenerate) {
            if (std::isnan(degenerate_from)) degenerate_from = prev_s;
        } else if (!std::isnan(degenerate_from)) {
            out.unresolved.push_back({degenerate_from, s});
            degenerate_from = std::numeric_limits<double>::quiet_NaN();
        } else if (!(here == prev)) {
            double lo = prev_s, hi = s;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if (signature(mid) == prev) lo = mid; else hi = mid;
            }
            out.points.push_back(0.5 * (lo + hi));
        }
        prev = here;
        prev_s = s;
    }
    if (!std::isnan(degenerate_from)) out.unresolved.push_back({degenerate_from, range.hi});
    return out;
}

}  // namespace arlab

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/reduced_flow.hpp"

namespace arlab {

struct GridAxis {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    double value(int i) const noexcept { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct PhaseCell {
    double K = 0.0;
    double a = 0.0;
    FlowKind kind = FlowKind::periodic;
};

/// Samples (K, a_{c,j}(K)).
struct CriticalCurve {
    int j = 1;
    std::vector<std::pair<double, double>> samples;
};

/// Classification of V' = 1 + a sin(j theta) over a (K, a) grid. Cells are
/// ordered K-major: cell(iK, ia) = cells[iK * a_axis.count + ia].
struct PhaseDiagram {
    int j = 1;
    GridAxis K_axis{"K"};
    GridAxis a_axis{"a"};
    std::vector<PhaseCell> cells;
    std::vector<CriticalCurve> curves;

    const PhaseCell& cell(int iK, int ia) const {
        return cells.at(static_cast<std::size_t>(iK) * static_cast<std::size_t>(a_axis.count) +
                        static_cast<std::size_t>(ia));
    }

    /// Long format `K,a,kind`.
    void write_cells_csv(std::ostream& os) const;
    /// `K,a_c_j` for the curve of harmonic j.
    void write_curve_csv(std::ostream& os) const;
};

/// Runs body(i) for i in [0, n); results must be written to slot i so the
/// output ordering does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

CriticalCurve critical_curve(int j, const GridAxis& K_axis);

/// Grid classification for the first harmonic plus the a_c overlay.
PhaseDiagram scan_first_harmonic(Interval K_range, Interval a_range, int nK, int na);

/// As scan_first_harmonic for V' = 1 + a sin(j theta), j >= 2.
PhaseDiagram scan_harmonic_j(int j, Interval K_range, Interval a_range, int nK, int na);

struct CriticalMaximum {
    double K_star = 0.0;
    double a_hat = 0.0;
};

/// max_K a_c(K) over (1, K_max]: coarse scan then golden section. A maximum
/// at the upper boundary triggers one retry on a wider range, then a
/// NumericError.
CriticalMaximum max_critical_amplitude(double K_max = 50.0, int coarse = 400);

/// Solutions of a_c(K) = a. `count` is 0 (no solution), 1 (a <= 1: K_minus
/// holds the single root) or 2 (K_minus < K_plus).
struct CouplingRoots {
    int count = 0;
    double K_minus = 0.0;
    double K_plus = 0.0;
};

CouplingRoots coupling_roots(double a, double tol = 1e-12);

}  // namespace arlab

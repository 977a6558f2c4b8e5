#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "arlab/kernel.hpp"
#include "arlab/trig_polynomial.hpp"

namespace arlab {

/// Philox4x32-10 counter-based generator.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Two independent standard normals for (seed, step, pair index).
std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t step, std::uint64_t pair) noexcept;

struct ParticleEnsemble {
    std::vector<double> phases;  // in [0, 2 pi)
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
    double time = 0.0;

    std::size_t size() const noexcept { return phases.size(); }

    /// N i.i.d. draws from a density by inverse CDF on a `table`-point grid.
    static ParticleEnsemble sample(const std::function<double(double)>& density, std::size_t n,
                                   std::uint64_t seed, int table = 4096);
    static ParticleEnsemble from_stationary(const StationaryDensity& sd, std::size_t n, std::uint64_t seed,
                                            double psi = 0.0);
};

struct ParticleParams {
    TrigPolynomial v_prime = TrigPolynomial::constant(0.0);
    double K = 0.0;
    double delta = 0.0;
    double sigma = 1.0;
    double dt = 1e-3;
};

/// Z_N = (1/N) sum e^{i psi_j}, summed in fixed blocks so the result does
/// not depend on the thread count.
std::complex<double> order_parameter(const ParticleEnsemble& ens);

/// One Euler-Maruyama step of
///   dpsi_j = [-delta V'(psi_j) - K Im(e^{i psi_j} conj Z_N)] dt + sigma dw_j.
/// Bitwise reproducible for a given seed. Returns the Z_N of the state
/// before the step.
std::complex<double> em_step(ParticleEnsemble& ens, const ParticleParams& params);

/// Normalised circular histogram: masses per bin (summing to 1).
std::vector<double> empirical_density(const ParticleEnsemble& ens, int bins);

struct ParticleSample {
    double t = 0.0;
    std::complex<double> Z;
};

/// Advance to `t_end` recording Z_N every `record_every` steps.
std::vector<ParticleSample> run_particles(ParticleEnsemble& ens, const ParticleParams& params, double t_end,
                                          int record_every = 1);

struct ParticlePeriod {
    double period = 0.0;
    int windings = 0;
    double transient = 0.0;
    std::vector<double> crossing_times;
};

/// Mean time per 2 pi of unwrapped arg Z_N over `windings` turns after a
/// transient. Throws NumericError if the phase does not wind by `max_time`.
ParticlePeriod measure_particle_period(ParticleEnsemble& ens, const ParticleParams& params, double transient,
                                       int windings, double max_time);

void write_particle_trajectory(std::ostream& os, const std::vector<ParticleSample>& samples);
void write_phases(std::ostream& os, const ParticleEnsemble& ens);

}  // namespace arlab

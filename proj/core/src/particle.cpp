#include "arlab/particle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBlock = 4096;

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// (0, 1] from 53 bits
inline double unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

inline double wrap(double x) noexcept {
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    return x < kTwoPi ? x : 0.0;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t step, std::uint64_t pair) noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32),
                                  static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const auto w = Philox4x32::generate(ctr, key);
    const double u1 = unit(w[0], w[1]);
    const double u2 = unit(w[2], w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
}

ParticleEnsemble ParticleEnsemble::sample(const std::function<double(double)>& density, std::size_t n,
                                          std::uint64_t seed, int table) {
    if (table < 8) throw DomainError("ParticleEnsemble::sample: table too small");
    std::vector<double> cdf(static_cast<std::size_t>(table) + 1, 0.0);
    const double h = kTwoPi / table;
    for (int i = 0; i < table; ++i) {
        const double mass = 0.5 * h * (std::max(0.0, density(i * h)) + std::max(0.0, density((i + 1) * h)));
        cdf[static_cast<std::size_t>(i) + 1] = cdf[static_cast<std::size_t>(i)] + mass;
    }
    const double total = cdf.back();
    if (!(total > 0.0)) throw DomainError("ParticleEnsemble::sample: density has no mass");
    for (double& v : cdf) v /= total;

    ParticleEnsemble ens;
    ens.seed = seed;
    ens.phases.resize(n);
    // draws use a step index disjoint from the dynamics
    const std::uint64_t init_step = ~std::uint64_t{0};
    for (std::size_t j = 0; j < n; ++j) {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32),
                                      static_cast<std::uint32_t>(init_step), static_cast<std::uint32_t>(init_step >> 32)};
        const auto w = Philox4x32::generate(ctr, {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
        const double u = unit(w[0], w[1]) - 0x1.0p-54;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.begin() - 1, 0, table - 1));
        const double width = cdf[i + 1] - cdf[i];
        const double frac = width > 0.0 ? (u - cdf[i]) / width : 0.5;
        ens.phases[j] = wrap((static_cast<double>(i) + frac) * h);
    }
    return ens;
}

ParticleEnsemble ParticleEnsemble::from_stationary(const StationaryDensity& sd, std::size_t n, std::uint64_t seed,
                                                   double psi) {
    return sample([&](double theta) { return sd.density(theta, psi); }, n, seed);
}

std::complex<double> order_parameter(const ParticleEnsemble& ens) {
    const std::size_t n = ens.size();
    if (n == 0) throw DomainError("order_parameter: empty ensemble");
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::complex<double>> partial(blocks);
#if defined(ARLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        double re = 0.0, im = 0.0;
        const std::size_t end = std::min(n, (static_cast<std::size_t>(b) + 1) * kBlock);
        for (std::size_t j = static_cast<std::size_t>(b) * kBlock; j < end; ++j) {
            re += std::cos(ens.phases[j]);
            im += std::sin(ens.phases[j]);
        }
        partial[static_cast<std::size_t>(b)] = {re, im};
    }
    std::complex<double> sum{0.0, 0.0};
    for (const auto& p : partial) sum += p;
    return sum / static_cast<double>(n);
}

std::complex<double> em_step(ParticleEnsemble& ens, const ParticleParams& p) {
    if (!(p.dt > 0.0)) throw DomainError("em_step: dt must be > 0");
    const std::size_t n = ens.size();
    if (n == 0) throw DomainError("em_step: empty ensemble");
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> cosines(n), sines(n);
    std::vector<std::complex<double>> partial(blocks);

#if defined(ARLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        double re = 0.0, im = 0.0;
        const std::size_t end = std::min(n, (static_cast<std::size_t>(b) + 1) * kBlock);
        for (std::size_t j = static_cast<std::size_t>(b) * kBlock; j < end; ++j) {
            const double c = std::cos(ens.phases[j]), s = std::sin(ens.phases[j]);
            cosines[j] = c;
            sines[j] = s;
            re += c;
            im += s;
        }
        partial[static_cast<std::size_t>(b)] = {re, im};
    }
    std::complex<double> Z{0.0, 0.0};
    for (const auto& v : partial) Z += v;
    Z /= static_cast<double>(n);

    const double noise = p.sigma * std::sqrt(p.dt);
    const int degree = p.v_prime.degree();
    std::vector<double> ca(static_cast<std::size_t>(degree) + 1), cb(static_cast<std::size_t>(degree) + 1);
    for (int k = 1; k <= degree; ++k) {
        ca[static_cast<std::size_t>(k)] = p.v_prime.a(k);
        cb[static_cast<std::size_t>(k)] = p.v_prime.b(k);
    }
    const double a0 = p.v_prime.a0();
    const double zr = Z.real(), zi = Z.imag();
    const std::size_t pairs = (n + 1) / 2;

#if defined(ARLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(pairs); ++q) {
        const auto g = gaussian_pair(ens.seed, ens.step, static_cast<std::uint64_t>(q));
        for (std::size_t s = 0; s < 2; ++s) {
            const std::size_t j = 2 * static_cast<std::size_t>(q) + s;
            if (j >= n) break;
            const double c1 = cosines[j], s1 = sines[j];
            // V'(psi) by the recurrence on (cos k psi, sin k psi)
            double force = a0;
            double ck = 1.0, sk = 0.0;
            for (int k = 1; k <= degree; ++k) {
                const double cn = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = cn;
                force += ca[static_cast<std::size_t>(k)] * ck + cb[static_cast<std::size_t>(k)] * sk;
            }
            // Im(e^{i psi} conj Z) = sin(psi) Re Z - cos(psi) Im Z
            const double drift = -p.delta * force - p.K * (s1 * zr - c1 * zi);
            double next = ens.phases[j] + drift * p.dt + noise * g[s];
            if (next < 0.0 || next >= kTwoPi) next = wrap(next);
            ens.phases[j] = next;
        }
    }
    ++ens.step;
    ens.time += p.dt;
    return Z;
}

std::vector<double> empirical_density(const ParticleEnsemble& ens, int bins) {
    if (bins < 8) throw DomainError("empirical_density: need at least 8 bins");
    if (ens.size() == 0) throw DomainError("empirical_density: empty ensemble");
    std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
    const double scale = bins / kTwoPi;
    for (double psi : ens.phases) {
        auto b = static_cast<int>(std::floor(wrap(psi) * scale));
        b = std::clamp(b, 0, bins - 1);
        mass[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& m : mass) m /= static_cast<double>(ens.size());
    return mass;
}

std::vector<ParticleSample> run_particles(ParticleEnsemble& ens, const ParticleParams& params, double t_end,
                                          int record_every) {
    if (record_every < 1) throw DomainError("run_particles: record_every must be >= 1");
    std::vector<ParticleSample> out;
    out.push_back({ens.time, order_parameter(ens)});
    const auto steps = static_cast<long long>(std::llround((t_end - ens.time) / params.dt));
    for (long long s = 1; s <= steps; ++s) {
        em_step(ens, params);
        if (s % record_every == 0 || s == steps) out.push_back({ens.time, order_parameter(ens)});
    }
    return out;
}

ParticlePeriod measure_particle_period(ParticleEnsemble& ens, const ParticleParams& params, double transient,
                                       int windings, double max_time) {
    if (windings < 1) throw DomainError("measure_particle_period: windings must be >= 1");
    const auto transient_steps = static_cast<long long>(std::llround(transient / params.dt));
    for (long long s = 0; s < transient_steps; ++s) em_step(ens, params);

    ParticlePeriod out;
    out.transient = ens.time;
    const double t_start = ens.time;
    double prev_t = t_start;
    double prev_raw = 0.0;
    double travel = 0.0, prev_travel = 0.0;
    bool first = true;
    // em_step reports Z_N at the start of its step, so each phase sample
    // belongs to the time before the call
    while (out.windings < windings) {
        if (ens.time - t_start > max_time) {
            throw NumericError("measure_particle_period: phase did not wind within the time budget", travel / kTwoPi);
        }
        const double t = ens.time;
        const double raw = std::arg(em_step(ens, params));
        if (first) {
            first = false;
            prev_raw = raw;
            continue;
        }
        double step = raw - prev_raw;
        step -= kTwoPi * std::round(step / kTwoPi);
        travel += step;
        prev_raw = raw;
        const double level = kTwoPi * (out.windings + 1);
        if (std::abs(travel) >= level) {
            const double frac = (level - std::abs(prev_travel)) / (std::abs(travel) - std::abs(prev_travel));
            out.crossing_times.push_back(prev_t + frac * (t - prev_t));
            ++out.windings;
        }
        prev_t = t;
        prev_travel = travel;
    }
    out.period = (out.crossing_times.back() - t_start) / out.windings;
    return out;
}

void write_particle_trajectory(std::ostream& os, const std::vector<ParticleSample>& samples) {
    os << "t,ZN_re,ZN_im,absZN\n";
    os.precision(17);
    for (const auto& s : samples) {
        os << s.t << ',' << s.Z.real() << ',' << s.Z.imag() << ',' << std::abs(s.Z) << '\n';
    }
}

void write_phases(std::ostream& os, const ParticleEnsemble& ens) {
    os.precision(17);
    for (double psi : ens.phases) os << psi << '\n';
}

}  // namespace arlab

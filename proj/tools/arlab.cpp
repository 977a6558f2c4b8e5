#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/errors.hpp"
#include "arlab/fokker_planck.hpp"
#include "arlab/io.hpp"
#include "arlab/manifold.hpp"
#include "arlab/particle.hpp"
#include "arlab/potential.hpp"
#include "arlab/reduced_flow.hpp"
#include "arlab/scan.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace arlab;

namespace {

// A subcommand whose parameters come from flags, a JSON config file, or both
// (flags win). Every resolved value is echoed into the manifest.
class Command {
public:
    Command(CLI::App& parent, const std::string& name, const std::string& help)
        : app_(parent.add_subcommand(name, help)), name_(name) {
        app_->add_option("--config", config_path_, "JSON config (or a manifest.json from an earlier run)");
        app_->add_option("--out", out_dir_, "Output directory")->capture_default_str();
    }

    template <class T>
    void param(const std::string& key, T& value, const std::string& help) {
        CLI::Option* opt = app_->add_option("--" + key, value, help)->capture_default_str();
        bindings_.push_back({key, opt, [&value](const json& j) { value = j.get<T>(); },
                             [&value] { return json(value); }});
    }

    void list_param(const std::string& key, std::vector<double>& value, const std::string& help) {
        CLI::Option* opt = app_->add_option("--" + key, value, help)->delimiter(',')->capture_default_str();
        bindings_.push_back({key, opt, [&value](const json& j) { value = j.get<std::vector<double>>(); },
                             [&value] { return json(value); }});
    }

    // Potentials: text form "a0; a1,b1; ..." on the command line, text or
    // {"a0","a","b"} in JSON.
    void poly_param(const std::string& key, std::string& value, const std::string& help) {
        CLI::Option* opt = app_->add_option("--" + key, value, help)->capture_default_str();
        bindings_.push_back({key, opt,
                             [&value](const json& j) {
                                 value = j.is_string() ? j.get<std::string>() : TrigPolynomial::from_json(j).to_text();
                             },
                             [&value] { return json(value); }});
    }

    void on_run(std::function<void(Command&)> body) {
        app_->callback([this, body] {
            resolve();
            body(*this);
        });
    }

    const std::string& name() const { return name_; }
    const json& params() const { return params_; }

    void write(const std::string& file, const std::string& content) {
        write_text(fs::path(out_dir_) / file, content);
        outputs_.push_back(file);
    }
    void write(const std::string& file, const json& value) { write(file, value.dump(2) + "\n"); }

    void finish() {
        Manifest m{name_, params_, outputs_};
        write_json(fs::path(out_dir_) / "manifest.json", m.to_json());
    }

private:
    struct Binding {
        std::string key;
        CLI::Option* option;
        std::function<void(const json&)> load;
        std::function<json()> dump;
    };

    void resolve() {
        json config = json::object();
        if (!config_path_.empty()) {
            config = read_json(config_path_);
            if (config.contains("command") && config.contains("params")) {
                if (config.at("command") != name_) {
                    throw std::invalid_argument("manifest is for '" + config.at("command").get<std::string>() +
                                                "', not '" + name_ + "'");
                }
                config = config.at("params");
            }
        }
        for (auto& b : bindings_) {
            if (b.option->count() == 0 && config.contains(b.key)) {
                try {
                    b.load(config.at(b.key));
                } catch (const json::exception& e) {
                    throw std::invalid_argument("config key '" + b.key + "': " + e.what());
                }
            }
            params_[b.key] = b.dump();
        }
        for (auto it = config.begin(); it != config.end(); ++it) {
            if (!params_.contains(it.key())) throw std::invalid_argument("unknown config key '" + it.key() + "'");
        }
    }

    CLI::App* app_;
    std::string name_;
    std::string config_path_;
    std::string out_dir_ = ".";
    std::vector<Binding> bindings_;
    json params_ = json::object();
    std::vector<std::string> outputs_;
};

TrigPolynomial poly(const std::string& text) { return TrigPolynomial::from_text(text); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct Options {
    // shared across commands; each command binds the ones it uses
    double K = 2.0;
    double sigma = 1.0;
    double tol = 1e-13;
    double degeneracy_tol = 1e-8;
    int k_max = 64;
    std::string V = "1; 0,1.1";
    std::string f = "1; 0,0.5";
    std::string target = "1; 0,0.5";
    std::string route = "both";
    double a = 1.1;
    double delta = 0.02;
    int n_modes = 50;
    double dt = 1e-3;
    double t_end = 100.0;
    double transient = -1.0;
    int windings = 5;
    double max_time = 2e5;
    double sample_interval = 1.0;
    std::string init = "stationary";
    double psi0 = 0.0;
    double psi = 0.0;
    std::vector<double> residual_deltas{0.005, 0.01, 0.02, 0.04};
    std::vector<double> table_deltas{0.005, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64};
    double settle = 50.0;
    double difference_step = 0.25;
    int shape_samples = 200;
    double duration = -1.0;
    long long particles = 10000;
    unsigned long long seed = 1;
    int record_every = 10;
    int j = 1;
    double K_min = 1.01;
    double K_max = 5.0;
    int nK = 50;
    double a_min = 0.0;
    double a_max = 2.0;
    int na = 50;
};

void add_fixed_point(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "fixed-point", "Order parameter r(K) and the stationary profile"));
    c.param("K", o.K, "Coupling strength");
    c.param("sigma", o.sigma, "Noise intensity");
    c.param("tol", o.tol, "Fixed-point tolerance");
    c.param("k-max", o.k_max, "Highest Bessel order stored");
    c.on_run([&o](Command& cmd) {
        const StationaryDensity sd = solve_order_parameter(o.K, o.tol, o.sigma, o.k_max);
        cmd.write("stationary.txt", sd.to_record());
        std::cout << "r = " << fmt(sd.r()) << "\n";
        cmd.finish();
    });
}

void add_force(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "force", "Effective reduced force f for a potential V'"));
    c.poly_param("V", o.V, "V' as \"a0; a1,b1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.param("route", o.route, "coeff | conv | both");
    c.on_run([&o](Command& cmd) {
        if (o.route != "coeff" && o.route != "conv" && o.route != "both") {
            throw std::invalid_argument("--route must be coeff, conv or both");
        }
        const StationaryDensity sd = solve_order_parameter(o.K);
        const TrigPolynomial v = poly(o.V);
        json out = {{"K", o.K}, {"r", sd.r()}, {"V", v.to_json()}};
        if (sd.synchronized()) out["D"] = sd.drift_factor();
        TrigPolynomial f;
        if (o.route != "conv") {
            f = effective_force_coeff(v, sd).f;
            out["f_coeff"] = f.to_json();
        }
        if (o.route != "coeff") {
            const TrigPolynomial g = effective_force_conv(v, sd).f;
            out["f_conv"] = g.to_json();
            if (o.route == "both") out["max_route_difference"] = max_coefficient_difference(f, g);
            else f = g;
        }
        out["f"] = f.to_text();
        cmd.write("force.json", out);
        std::cout << f.to_text() << "\n";
        cmd.finish();
    });
}

void add_design(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "design", "Potential V' whose reduced force is a target f"));
    c.poly_param("target", o.target, "Target f as \"A0; A1,B1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.on_run([&o](Command& cmd) {
        const StationaryDensity sd = solve_order_parameter(o.K);
        const TrigPolynomial v = design_potential(poly(o.target), sd);
        cmd.write("potential.json", json{{"K", o.K}, {"V", v.to_text()}, {"coefficients", v.to_json()}});
        std::cout << v.to_text() << "\n";
        cmd.finish();
    });
}

void add_classify(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "classify", "Fixed points or period of psi' = -f(psi)"));
    c.poly_param("f", o.f, "Reduced force f as \"A0; A1,B1; ...\"");
    c.param("tol", o.degeneracy_tol, "Degeneracy threshold on |f'| at a zero");
    c.on_run([&o](Command& cmd) {
        const FlowClassification cls = classify(poly(o.f), o.degeneracy_tol);
        cmd.write("classification.json", cls.to_json());
        std::cout << cls.to_json().dump() << "\n";
        cmd.finish();
    });
}

void add_period(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "period", "Reduced period of V' = 1 + a sin(theta)"));
    c.param("a", o.a, "Amplitude");
    c.param("K", o.K, "Coupling strength");
    c.param("dt", o.dt, "Step for the winding-time cross-check (0 to skip)");
    c.on_run([&o](Command& cmd) {
        const StationaryDensity sd = solve_order_parameter(o.K);
        const double ac = sd.critical_amplitude(1);
        const double tau = period_first_harmonic(o.a, sd);
        json out = {{"a", o.a}, {"K", o.K}, {"a_c", ac}, {"tau", tau}};
        if (o.dt > 0.0) {
            TrigPolynomial f = TrigPolynomial::constant(1.0);
            f.set(1, 0.0, o.a / ac);
            out["winding_time"] = winding_time(f, 0.0, o.dt);
        }
        cmd.write("period.json", out);
        std::cout << "tau = " << fmt(tau) << "\n";
        cmd.finish();
    });
}

void bind_pde(Command& c, Options& o) {
    c.poly_param("V", o.V, "V' as \"a0; a1,b1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.param("delta", o.delta, "Perturbation strength");
    c.param("n-modes", o.n_modes, "Fourier truncation N");
    c.param("dt", o.dt, "Time step");
}

void add_pde_run(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "pde-run", "Integrate the Fokker-Planck equation"));
    bind_pde(c, o);
    c.param("t-end", o.t_end, "Final time");
    c.param("sample-interval", o.sample_interval, "Trajectory sampling interval");
    c.param("init", o.init, "stationary | uniform");
    c.param("psi0", o.psi0, "Phase of the stationary initial profile");
    c.on_run([&o](Command& cmd) {
        SpectralDensity state(o.n_modes);
        if (o.init == "stationary") {
            state = SpectralDensity::from_stationary(solve_order_parameter(o.K), o.n_modes, o.psi0);
        } else if (o.init != "uniform") {
            throw std::invalid_argument("--init must be stationary or uniform");
        }
        FokkerPlanckSolver solver(poly(o.V), o.K, o.delta, o.n_modes, o.dt);
        const auto samples = record_trajectory(state, solver, o.t_end, o.sample_interval);
        cmd.write("trajectory.csv", trajectory_csv(samples));
        cmd.write("snapshot.csv", snapshot_csv(state));
        std::cout << "|Z| = " << fmt(state.order_parameter().modulus()) << " at t = " << fmt(state.time())
                  << (state.resolved() ? "" : " (resolution alarm: |c_N|/|c_1| >= 1e-6)") << "\n";
        cmd.finish();
    });
}

void add_pde_period(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "pde-period", "Period of the pulsating wave of the full PDE"));
    bind_pde(c, o);
    c.param("transient", o.transient, "Transient before measuring (< 0: one reduced period, at least 200)");
    c.param("windings", o.windings, "Windings averaged over");
    c.param("max-time", o.max_time, "Time budget for the windings");
    c.on_run([&o](Command& cmd) {
        PdeRunConfig run;
        run.n_modes = o.n_modes;
        run.dt = o.dt;
        run.transient = o.transient;
        run.windings = o.windings;
        run.max_time = o.max_time;
        const PeriodMeasurement m = measure_period(poly(o.V), o.K, o.delta, run);
        cmd.write("pde_period.json", json{{"period", m.period},
                                          {"windings", m.windings},
                                          {"transient", m.transient},
                                          {"min_density", m.min_density},
                                          {"resolved", m.resolved},
                                          {"crossing_times", m.crossing_times}});
        std::cout << "T = " << fmt(m.period) << "\n";
        cmd.finish();
    });
}

void add_correction(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "correction", "First-order manifold correction n_psi"));
    c.poly_param("V", o.V, "V' as \"a0; a1,b1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.param("psi", o.psi, "Phase on the manifold");
    c.param("n-modes", o.n_modes, "Fourier truncation N");
    c.on_run([&o](Command& cmd) {
        const ManifoldCorrection n = solve_manifold_correction(o.psi, poly(o.V), solve_order_parameter(o.K), o.n_modes);
        std::ostringstream csv;
        csv.precision(17);
        csv << "theta,n\n";
        for (int i = 0; i < 512; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / 512;
            csv << theta << ',' << n(theta) << '\n';
        }
        cmd.write("correction.csv", csv.str());
        cmd.write("correction.json", json{{"psi", n.psi},
                                          {"residual", n.residual},
                                          {"constraint", n.constraint},
                                          {"rcond", n.rcond},
                                          {"ill_conditioned", n.ill_conditioned},
                                          {"l2_norm", n.l2_norm()}});
        std::cout << "residual = " << fmt(n.residual) << (n.ill_conditioned ? " (ill-conditioned)" : "") << "\n";
        cmd.finish();
    });
}

void add_residual_scaling(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "residual-scaling", "Phase-velocity residual against -delta f"));
    c.poly_param("V", o.V, "V' as \"a0; a1,b1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.list_param("deltas", o.residual_deltas, "Comma-separated deltas");
    c.param("n-modes", o.n_modes, "Fourier truncation N");
    c.param("dt", o.dt, "Time step");
    c.param("settle", o.settle, "Initial layer excluded from the maxima");
    c.param("difference-step", o.difference_step, "Phase sampling interval");
    c.param("duration", o.duration, "Run length after settling (< 0: reduced period / delta)");
    c.param("shape-samples", o.shape_samples, "Shape comparisons per run");
    c.on_run([&o](Command& cmd) {
        ResidualRunConfig cfg;
        cfg.n_modes = o.n_modes;
        cfg.dt = o.dt;
        cfg.settle = o.settle;
        cfg.difference_step = o.difference_step;
        cfg.duration = o.duration;
        cfg.shape_samples = o.shape_samples;
        const ResidualReport report = phase_velocity_residual(poly(o.V), o.K, o.residual_deltas, cfg);
        cmd.write("residual.json", report.to_json());
        std::cout << "exponent = " << fmt(report.exponent) << ", shape exponent = " << fmt(report.shape_exponent) << "\n";
        cmd.finish();
    });
}

void add_particle_run(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "particle-run", "Euler-Maruyama N-particle simulation"));
    c.poly_param("V", o.V, "V' as \"a0; a1,b1; ...\"");
    c.param("K", o.K, "Coupling strength");
    c.param("delta", o.delta, "Perturbation strength");
    c.param("sigma", o.sigma, "Noise intensity");
    c.param("particles", o.particles, "Number of particles N");
    c.param("dt", o.dt, "Time step");
    c.param("t-end", o.t_end, "Final time");
    c.param("seed", o.seed, "RNG seed");
    c.param("record-every", o.record_every, "Steps between trajectory rows");
    c.param("init", o.init, "stationary | uniform");
    c.on_run([&o](Command& cmd) {
        if (o.particles < 1) throw std::invalid_argument("--particles must be >= 1");
        const auto n = static_cast<std::size_t>(o.particles);
        ParticleEnsemble ens;
        if (o.init == "stationary") {
            ens = ParticleEnsemble::from_stationary(solve_order_parameter(o.K / (o.sigma * o.sigma)), n, o.seed);
        } else if (o.init == "uniform") {
            ens = ParticleEnsemble::sample([](double) { return 1.0; }, n, o.seed);
        } else {
            throw std::invalid_argument("--init must be stationary or uniform");
        }
        ParticleParams p{poly(o.V), o.K, o.delta, o.sigma, o.dt};
        const auto samples = run_particles(ens, p, o.t_end, o.record_every);
        std::ostringstream traj, phases;
        write_particle_trajectory(traj, samples);
        write_phases(phases, ens);
        cmd.write("particle_trajectory.csv", traj.str());
        cmd.write("phases.txt", phases.str());
        std::cout << "|Z_N| = " << fmt(std::abs(samples.back().Z)) << " at t = " << fmt(ens.time) << "\n";
        cmd.finish();
    });
}

void add_scan(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "scan", "(K, a) phase diagram for V' = 1 + a sin(j theta)"));
    c.param("j", o.j, "Harmonic index");
    c.param("K-min", o.K_min, "Smallest K (> 1)");
    c.param("K-max", o.K_max, "Largest K");
    c.param("nK", o.nK, "K grid points");
    c.param("a-min", o.a_min, "Smallest a");
    c.param("a-max", o.a_max, "Largest a");
    c.param("na", o.na, "a grid points");
    c.on_run([&o](Command& cmd) {
        const Interval Kr{o.K_min, o.K_max}, ar{o.a_min, o.a_max};
        const PhaseDiagram d = o.j == 1 ? scan_first_harmonic(Kr, ar, o.nK, o.na) : scan_harmonic_j(o.j, Kr, ar, o.nK, o.na);
        std::ostringstream cells, curve;
        d.write_cells_csv(cells);
        d.write_curve_csv(curve);
        cmd.write("phase_diagram.csv", cells.str());
        cmd.write("critical_curve.csv", curve.str());
        if (o.j == 1) {
            const CriticalMaximum m = max_critical_amplitude();
            cmd.write("maximum.json", json{{"K_star", m.K_star}, {"a_hat", m.a_hat}});
            std::cout << "a_hat = " << fmt(m.a_hat) << " at K* = " << fmt(m.K_star) << "\n";
        }
        std::cout << d.cells.size() << " cells\n";
        cmd.finish();
    });
}

void add_table1(CLI::App& app, Options& o, std::vector<std::unique_ptr<Command>>& cmds) {
    auto& c = *cmds.emplace_back(std::make_unique<Command>(app, "table1", "PDE periods T_delta for V = theta - a cos(theta)"));
    c.param("a", o.a, "Amplitude");
    c.param("K", o.K, "Coupling strength");
    c.list_param("deltas", o.table_deltas, "Comma-separated deltas");
    c.param("n-modes", o.n_modes, "Fourier truncation N");
    c.param("dt", o.dt, "Time step");
    c.param("windings", o.windings, "Windings averaged over");
    c.on_run([&o](Command& cmd) {
        TrigPolynomial v = TrigPolynomial::constant(1.0);
        v.set(1, 0.0, o.a);
        const double tau = period_first_harmonic(o.a, o.K);
        PdeRunConfig run;
        run.n_modes = o.n_modes;
        run.dt = o.dt;
        run.windings = o.windings;
        std::ostringstream csv;
        csv.precision(10);
        csv << "delta,T_delta,tau_over_delta\n";
        for (double delta : o.table_deltas) {
            const PeriodMeasurement m = measure_period(v, o.K, delta, run);
            csv << delta << ',' << m.period << ',' << tau / delta << '\n';
            std::cout << fmt(delta) << "  " << fmt(m.period) << "  " << fmt(tau / delta) << std::endl;
        }
        cmd.write("table1.csv", csv.str());
        cmd.finish();
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arlab: mean-field active rotator laboratory"};
    app.require_subcommand(1);
    Options opts;
    std::vector<std::unique_ptr<Command>> cmds;
    add_fixed_point(app, opts, cmds);
    add_force(app, opts, cmds);
    add_design(app, opts, cmds);
    add_classify(app, opts, cmds);
    add_period(app, opts, cmds);
    add_pde_run(app, opts, cmds);
    add_pde_period(app, opts, cmds);
    add_correction(app, opts, cmds);
    add_residual_scaling(app, opts, cmds);
    add_particle_run(app, opts, cmds);
    add_scan(app, opts, cmds);
    add_table1(app, opts, cmds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "arlab: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

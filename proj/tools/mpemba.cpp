// mpemba — command-line front end.
//
// Exit codes: 0 ok, 1 I/O, 2 config, 3 light-cone guard, 4 numerical tolerance.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mpemba/errors.hpp"
#include "mpemba/experiment.hpp"
#include "mpemba/io.hpp"
#include "mpemba/kernel.hpp"
#include "mpemba/states.hpp"
#include "mpemba/symmetry.hpp"

namespace fs = std::filesystem;
using namespace mpemba;

namespace {

enum Exit { ok = 0, io_error = 1, config_error = 2, guard_error = 3, numerical_error = 4 };

struct ParamFlags {
    double J{1.0};
    double g0{0.2};
    double omega0{0.0};
    double detuning{0.0};  // omega_c - omega0
    std::optional<int> M;

    void attach(CLI::App* cmd, bool with_M) {
        cmd->add_option("--J", J, "hopping rate")->capture_default_str();
        cmd->add_option("--g0", g0, "atom-cavity coupling")->capture_default_str();
        cmd->add_option("--omega0", omega0, "atomic frequency")->capture_default_str();
        cmd->add_option("--detuning", detuning, "omega_c - omega0")->capture_default_str();
        if (with_M) cmd->add_option("--M", M, "lattice half-width (default: from the guard)");
    }

    ModelParams params(int fallback_M) const {
        ModelParams p;
        p.J = J;
        p.g0 = g0;
        p.omega0 = omega0;
        p.omega_c = omega0 + detuning;
        p.M = M.value_or(fallback_M);
        p.validate();
        return p;
    }
};

int guard_M(double J, double horizon) {
    return static_cast<int>(std::ceil(2.0 * J * horizon - 1e-9)) + guard_margin_sites;
}

void emit(const std::optional<fs::path>& out, const std::string& text) {
    if (out) {
        if (out->has_parent_path()) fs::create_directories(out->parent_path());
        io::write_text(*out, text);
    } else {
        std::cout << text;
    }
}

// Values below the principal-value quadrature accuracy are reported as 0.
std::string short_number(double x) {
    if (std::abs(x) < 1e-12) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// ---- run ----------------------------------------------------------------

struct RunFlags {
    fs::path config;
    std::optional<fs::path> out;
    bool override_guard{false};
};

int cmd_run(const RunFlags& f) {
    const auto cfg = load_experiment_config(f.config);
    const fs::path out = f.out.value_or(fs::path(cfg.outputs));
    const auto r = run_experiment(cfg, out, {f.override_guard});
    std::cout << "wrote " << out.string() << " (M=" << r.guard.M << ")\n";
    if (r.crossing_time_reversed) {
        std::cout << "canonical vs time_reversed: " << to_string(r.crossing_time_reversed->verdict) << "\n";
    }
    if (r.crossing_dark) std::cout << "canonical vs dark: " << to_string(r.crossing_dark->verdict) << "\n";
    return ok;
}

// ---- rate ---------------------------------------------------------------

int cmd_rate(const ParamFlags& pf) {
    const auto m = markov_rate_and_shift(pf.params(1));
    std::cout << "gamma=" << short_number(m.gamma) << "\n"
              << "delta=" << short_number(m.delta) << "\n"
              << "k0=" << short_number(m.k0) << "\n"
              << "v_g=" << short_number(m.v_g) << "\n";
    return ok;
}

// ---- kernel -------------------------------------------------------------

struct KernelFlags {
    double tau_max{50.0};
    double step{0.05};
    std::optional<fs::path> state;
    fs::path out{"kernel_out"};
};

int cmd_kernel(const ParamFlags& pf, const KernelFlags& f) {
    std::optional<ExcitationState> s;
    if (f.state) s = io::load_state(*f.state);
    const auto p = pf.params(s ? s->M() : 1);
    const auto kernel = memory_kernel(p, f.tau_max, f.step, 64);
    const auto grid = UniformGrid::spanning(f.tau_max, f.step);
    const auto forcing = forcing_term(p, s ? *s : canonical_state(p), grid);
    fs::create_directories(f.out);
    io::write_text(f.out / "kernel.csv", io::kernel_csv(kernel));
    io::write_text(f.out / "forcing.csv", io::forcing_csv(forcing));
    std::cout << "n_k=" << kernel.n_k;
    if (kernel.memory_time) std::cout << " memory_time=" << short_number(*kernel.memory_time);
    std::cout << "\n";
    return ok;
}

// ---- volterra -----------------------------------------------------------

struct VolterraFlags {
    fs::path state;
    double horizon{50.0};
    double step{0.05};
    bool markov{false};
    std::optional<fs::path> out;
};

int cmd_volterra(const ParamFlags& pf, const VolterraFlags& f) {
    const auto s = io::load_state(f.state);
    const auto p = pf.params(s.M());
    if (p.M != s.M()) throw ConfigError("--M does not match the state file (M=" + std::to_string(s.M()) + ")");
    const auto grid = UniformGrid::spanning(f.horizon, f.step);
    const auto forcing = forcing_term(p, s, grid);
    const auto sol = f.markov ? solve_volterra(s.atom_amp(), markov_rate_and_shift(p), forcing, grid)
                              : solve_volterra(s.atom_amp(), memory_kernel(p, f.horizon, f.step, 64),
                                               forcing, grid);
    emit(f.out, io::volterra_csv(sol));
    std::cerr << "error_estimate=" << short_number(sol.error_estimate) << "\n";
    return ok;
}

// ---- state --------------------------------------------------------------

struct StateFlags {
    std::string kind;
    double t_f{20.0};
    int L{20};
    double tol{1e-10};
    std::optional<fs::path> out;
};

int cmd_state(const ParamFlags& pf, const StateFlags& f) {
    const ExcitationState s = [&] {
        if (f.kind == "canonical") return canonical_state(pf.params(1));
        if (f.kind == "time-reversed") {
            return time_reversed_state(pf.params(guard_M(pf.J, f.t_f)), f.t_f, f.tol);
        }
        return dark_state(pf.params(2 * f.L + guard_margin_sites), f.L);
    }();
    emit(f.out, io::state_to_json(s) + "\n");
    return ok;
}

// ---- check --------------------------------------------------------------

struct CheckFlags {
    bool paper_config{false};
    std::optional<fs::path> config;
};

int cmd_check(const CheckFlags& f) {
    if (f.paper_config == f.config.has_value()) throw ConfigError("check: give exactly one of --paper-config or --config");
    const ExperimentConfig cfg = f.config ? load_experiment_config(*f.config) : ExperimentConfig{};
    cfg.validate();
    int failed = 0;
    auto report = [&](bool pass, const std::string& name, double value, double limit) {
        failed += !pass;
        std::cout << (pass ? "[ok]   " : "[fail] ") << name << ": " << short_number(value)
                  << (pass ? " <= " : " > ") << short_number(limit) << "\n";
    };

    ModelParams p = cfg.params();
    p.M = std::max(p.M, guard_M(p.J, std::max(50.0, 2.0 * cfg.t_f)));
    const auto h = build_hamiltonian(p);

    const auto rt = reversal_roundtrip_check(h, cfg.t_f, cfg.tol);
    report(rt.residual < 1e-8, "reversal roundtrip residual", rt.residual, 1e-8);

    if (p.g0 > 0.0) {
        const auto m = markov_rate_and_shift(p);
        const double fgr = fermi_golden_rule_rate(p);
        const double rel = std::abs(m.gamma - fgr) / fgr;
        report(rel < 1e-6, "quadrature vs golden-rule rate (rel)", rel, 1e-6);
    }

    const auto kernel = memory_kernel(p, 50.0, 0.05, 64);
    double kerr = 0.0;
    for (int i = 0; i < kernel.tau_grid.count; ++i) {
        const double tau = kernel.tau_grid.at(i);
        const cplx expected = std::polar(p.g0 * p.g0, -p.detuning() * tau) *
                              std::cyl_bessel_j(0.0, 2.0 * p.J * tau);
        kerr = std::max(kerr, std::abs(kernel.values[static_cast<std::size_t>(i)] - expected));
    }
    report(kerr < 1e-8, "kernel vs g0^2 J0(2J tau)", kerr, 1e-8);

    const UniformGrid grid = UniformGrid::spanning(50.0, 0.05);
    std::vector<std::pair<std::string, ExcitationState>> states{{"canonical", canonical_state(p)}};
    if (p.g0 > 0.0 && 2 * cfg.L <= p.M - guard_margin_sites) states.emplace_back("dark", dark_state(p, cfg.L));
    for (const auto& [name, s] : states) {
        const auto lattice = evolve(s, h, {50.0, 0.05, cfg.tol, {}, false});
        const auto sol = solve_volterra(s.atom_amp(), kernel, forcing_term(p, s, grid), grid);
        double d = 0.0;
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            d = std::max(d, std::abs(std::abs(sol.amplitudes[i]) - std::abs(lattice.atom_amplitudes[i])));
        }
        report(d < 1e-3, "volterra vs lattice |c_a| (" + name + ")", d, 1e-3);
    }
    return failed == 0 ? ok : numerical_error;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Waveguide-QED relaxation simulator"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "run a configured experiment");
    run->add_option("--config", run_flags.config, "JSON config")->required();
    run->add_option("--out", run_flags.out, "output directory (overrides config 'outputs')");
    run->add_flag("--override-guard", run_flags.override_guard, "evolve even if the light-cone guard fails");

    ParamFlags rate_p;
    auto* rate = app.add_subcommand("rate", "print the golden-rule rate and Lamb shift");
    rate_p.attach(rate, false);

    ParamFlags kernel_p;
    KernelFlags kernel_flags;
    auto* kernel = app.add_subcommand("kernel", "dump the memory kernel and forcing term");
    kernel_p.attach(kernel, true);
    kernel->add_option("--tau-max", kernel_flags.tau_max)->capture_default_str();
    kernel->add_option("--step", kernel_flags.step)->capture_default_str();
    kernel->add_option("--state", kernel_flags.state, "initial state file (default canonical)");
    kernel->add_option("--out", kernel_flags.out, "output directory")->capture_default_str();

    ParamFlags volterra_p;
    VolterraFlags volterra_flags;
    auto* volterra = app.add_subcommand("volterra", "solve the atom-amplitude integral equation");
    volterra_p.attach(volterra, true);
    volterra->add_option("--state", volterra_flags.state, "initial state file")->required();
    volterra->add_option("--horizon", volterra_flags.horizon)->capture_default_str();
    volterra->add_option("--step", volterra_flags.step)->capture_default_str();
    volterra->add_flag("--markov", volterra_flags.markov, "use the memoryless kernel");
    volterra->add_option("--out", volterra_flags.out, "CSV path (default stdout)");

    ParamFlags state_p;
    StateFlags state_flags;
    auto* state = app.add_subcommand("state", "write an initial-state file");
    state_p.attach(state, true);
    state->add_option("kind", state_flags.kind)
        ->required()
        ->check(CLI::IsMember({"canonical", "time-reversed", "dark"}));
    state->add_option("--t-f", state_flags.t_f, "reversal time")->capture_default_str();
    state->add_option("--L", state_flags.L, "dark-state half-size")->capture_default_str();
    state->add_option("--tol", state_flags.tol)->capture_default_str();
    state->add_option("--out", state_flags.out, "JSON path (default stdout)");

    CheckFlags check_flags;
    auto* check = app.add_subcommand("check", "run the symmetry and cross-solver validations");
    check->add_flag("--paper-config", check_flags.paper_config, "use the reference parameters");
    check->add_option("--config", check_flags.config, "JSON config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*rate) return cmd_rate(rate_p);
        if (*kernel) return cmd_kernel(kernel_p, kernel_flags);
        if (*volterra) return cmd_volterra(volterra_p, volterra_flags);
        if (*state) return cmd_state(state_p, state_flags);
        if (*check) return cmd_check(check_flags);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const ResonanceOutsideBandError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const GuardError& e) {
        std::cerr << "guard error: " << e.what() << "\n";
        return guard_error;
    } catch (const ToleranceError& e) {
        std::cerr << "tolerance error: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    }
    return ok;
}

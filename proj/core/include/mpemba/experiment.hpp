// experiment.hpp — Config-driven reproduction of the three-curve relaxation study.
//
// Config (JSON, unknown keys rejected):
//   J, g0_over_J, omega0, omega_c   reals
//   M                               integer or "auto" (ceil(2 J max(horizon, 2 t_f)) + 8)
//   horizon, sample_step, t_f, tol  reals
//   L                               integer (dark-state half-size)
//   outputs                         output directory
//   curves                          subset of ["canonical", "time_reversed", "dark"]
//
// Outputs: curves.csv, curves_log.csv, summary.json, states/<curve>.json

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpemba/kernel.hpp"
#include "mpemba/observables.hpp"
#include "mpemba/propagate.hpp"

namespace mpemba {

enum class Curve { canonical = 0, time_reversed = 1, dark = 2 };
inline constexpr std::array<Curve, 3> all_curves{Curve::canonical, Curve::time_reversed,
                                                 Curve::dark};
std::string_view curve_name(Curve c);

inline constexpr int summary_schema_version = 1;

struct ExperimentConfig {
    double J{1.0};
    double g0_over_J{0.2};
    double omega0{0.0};
    double omega_c{0.0};
    std::optional<int> M;  // empty means "auto"
    double horizon{120.0};
    double sample_step{0.1};
    double t_f{20.0};
    int L{20};
    double tol{1e-10};
    std::string outputs{"out"};
    std::vector<Curve> curves{all_curves.begin(), all_curves.end()};

    int auto_M() const;
    int resolved_M() const { return M.value_or(auto_M()); }
    ModelParams params() const;
    bool wants(Curve c) const;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

// Throws ConfigError with line/column for syntax errors and the key name for bad keys.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CurveResult {
    Curve curve;
    ExcitationState initial;
    Trajectory trajectory;
    std::optional<DecayFit> fit;
    std::string fit_note;  // why the fit is absent
    double initial_slope{0.0};
    bool contractive{true};
};

struct ExperimentResult {
    ExperimentConfig config;
    GuardReport guard;
    bool guard_overridden{false};
    std::optional<MarkovData> markov;
    std::vector<CurveResult> curves;
    std::optional<MpembaReport> crossing_time_reversed;  // canonical vs time-reversed
    std::optional<MpembaReport> crossing_dark;           // canonical vs dark
    std::optional<double> delay_time_reversed;
    std::optional<double> delay_dark;

    const CurveResult* find(Curve c) const;
};

struct RunOptions {
    bool override_guard{false};
};

// Computes all requested curves (concurrently) and the derived reports.
ExperimentResult compute_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::string curves_csv(const ExperimentResult& result);
std::string curves_log_csv(const ExperimentResult& result, int points = 200);
std::string summary_json(const ExperimentResult& result);

// compute_experiment + file output into out_dir (created if missing).
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options = {});

} // namespace mpemba

#include "mpemba/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "json.hpp"
#include "mpemba/errors.hpp"
#include "mpemba/io.hpp"
#include "mpemba/states.hpp"

namespace mpemba {

using nlohmann::json;

std::string_view curve_name(Curve c) {
    switch (c) {
        case Curve::canonical: return "canonical";
        case Curve::time_reversed: return "time_reversed";
        case Curve::dark: return "dark";
    }
    return "unknown";
}

int ExperimentConfig::auto_M() const {
    const double reach = 2.0 * J * std::max(horizon, 2.0 * t_f);
    return static_cast<int>(std::ceil(reach - 1e-9)) + guard_margin_sites;
}

ModelParams ExperimentConfig::params() const {
    ModelParams p;
    p.J = J;
    p.g0 = g0_over_J * J;
    p.omega0 = omega0;
    p.omega_c = omega_c;
    p.M = resolved_M();
    return p;
}

bool ExperimentConfig::wants(Curve c) const {
    return std::find(curves.begin(), curves.end(), c) != curves.end();
}

void ExperimentConfig::validate() const {
    auto fail = [](const char* key, const std::string& why) {
        throw ConfigError(std::string("config key '") + key + "': " + why);
    };
    if (!std::isfinite(J) || !(J > 0.0)) fail("J", "must be > 0");
    if (!std::isfinite(g0_over_J) || g0_over_J < 0.0) fail("g0_over_J", "must be >= 0");
    if (!std::isfinite(omega0)) fail("omega0", "must be finite");
    if (!std::isfinite(omega_c)) fail("omega_c", "must be finite");
    if (M && *M < 1) fail("M", "must be >= 1 or \"auto\"");
    if (!std::isfinite(horizon) || !(horizon > 0.0)) fail("horizon", "must be > 0");
    if (!std::isfinite(sample_step) || !(sample_step > 0.0) || sample_step > horizon) {
        fail("sample_step", "must be > 0 and <= horizon");
    }
    if (!std::isfinite(t_f) || t_f < 0.0) fail("t_f", "must be >= 0");
    if (L < 0) fail("L", "must be >= 0");
    if (!std::isfinite(tol) || !(tol > 0.0)) fail("tol", "must be > 0");
    if (outputs.empty()) fail("outputs", "must be a non-empty path");
    if (curves.empty()) fail("curves", "must name at least one curve");
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            if (curves[i] == curves[j]) fail("curves", "duplicate entry");
        }
    }
    if (wants(Curve::dark)) {
        if (!(g0_over_J > 0.0)) fail("g0_over_J", "dark curve requires g0 > 0");
        const int m = resolved_M();
        if (2 * L > m - guard_margin_sites) {
            std::ostringstream os;
            os << "dark state needs 2L <= M - " << guard_margin_sites << " (L=" << L
               << ", M=" << m << ")";
            fail("L", os.str());
        }
    }
}

namespace {

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "': expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "': expected an integer");
    return v.get<int>();
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "J") {
            c.J = number(v, key);
        } else if (key == "g0_over_J") {
            c.g0_over_J = number(v, key);
        } else if (key == "omega0") {
            c.omega0 = number(v, key);
        } else if (key == "omega_c") {
            c.omega_c = number(v, key);
        } else if (key == "M") {
            if (v.is_string() && v.get<std::string>() == "auto") {
                c.M.reset();
            } else {
                c.M = integer(v, key);
            }
        } else if (key == "horizon") {
            c.horizon = number(v, key);
        } else if (key == "sample_step") {
            c.sample_step = number(v, key);
        } else if (key == "t_f") {
            c.t_f = number(v, key);
        } else if (key == "L") {
            c.L = integer(v, key);
        } else if (key == "tol") {
            c.tol = number(v, key);
        } else if (key == "outputs") {
            if (!v.is_string()) throw ConfigError("config key 'outputs': expected a string");
            c.outputs = v.get<std::string>();
        } else if (key == "curves") {
            if (!v.is_array()) throw ConfigError("config key 'curves': expected an array");
            c.curves.clear();
            for (const auto& item : v) {
                const std::string name = item.is_string() ? item.get<std::string>() : "";
                auto it = std::find_if(all_curves.begin(), all_curves.end(),
                                       [&](Curve cv) { return curve_name(cv) == name; });
                if (it == all_curves.end()) {
                    throw ConfigError("config key 'curves': unknown curve '" + item.dump() +
                                      "' (expected canonical, time_reversed, dark)");
                }
                c.curves.push_back(*it);
            }
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(io::read_text(path));
}

const CurveResult* ExperimentResult::find(Curve c) const {
    for (const auto& r : curves) {
        if (r.curve == c) return &r;
    }
    return nullptr;
}

namespace {

TimeWindow fit_window(const ExperimentConfig& c, Curve curve) {
    const double unit = 1.0 / c.J;
    switch (curve) {
        case Curve::canonical: return {5.0 * unit, 50.0 * unit};
        case Curve::time_reversed: return {c.t_f + 5.0 * unit, c.t_f + 50.0 * unit};
        case Curve::dark: {
            const double delay = c.L * unit;
            return {delay + 10.0 * unit, delay + 60.0 * unit};
        }
    }
    return {};
}

ExcitationState initial_state(Curve curve, const ExperimentConfig& c, const Hamiltonian& h,
                              bool override_guard) {
    const ModelParams& p = h.params();
    switch (curve) {
        case Curve::canonical: return canonical_state(p);
        case Curve::time_reversed:
            if (override_guard && !check_truncation(p, c.t_f).passed) {
                return conjugate_state(advance(canonical_state(p), h, c.t_f, c.tol));
            }
            return time_reversed_state(h, c.t_f, c.tol);
        case Curve::dark: return dark_state(p, c.L);
    }
    throw ConfigError("unknown curve");
}

} // namespace

ExperimentResult compute_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    const ModelParams params = config.params();
    const Hamiltonian h = build_hamiltonian(params);

    result.guard = check_truncation(params, config.horizon);
    if (!result.guard.passed) {
        if (!options.override_guard) {
            std::ostringstream os;
            os << "light-cone guard failed: M=" << params.M << " is too small for horizon "
               << config.horizon << "; requires M >= " << result.guard.required_M;
            throw GuardError(os.str());
        }
        result.guard_overridden = true;
    }

    try {
        result.markov = markov_rate_and_shift(params);
    } catch (const ResonanceOutsideBandError&) {
        result.markov.reset();
    }

    EvolveOptions evo;
    evo.horizon = config.horizon;
    evo.sample_step = config.sample_step;
    evo.tol = config.tol;
    evo.override_guard = options.override_guard;

    std::vector<std::future<CurveResult>> jobs;
    for (Curve curve : all_curves) {
        if (!config.wants(curve)) continue;
        jobs.push_back(std::async(std::launch::async, [&, curve] {
            ExcitationState init = initial_state(curve, config, h, options.override_guard);
            Trajectory traj = evolve(init, h, evo);
            CurveResult r{curve, std::move(init), std::move(traj), std::nullopt, "", 0.0, true};
            r.initial_slope = initial_slope(r.initial, params);
            r.contractive = is_monotone_contractive(r.trajectory);
            TimeWindow w = fit_window(config, curve);
            w.end = std::min(w.end, config.horizon);
            try {
                r.fit = fit_decay_rate(r.trajectory, w);
            } catch (const ConfigError& e) {
                r.fit_note = e.what();
            }
            return r;
        }));
    }
    for (auto& j : jobs) result.curves.push_back(j.get());

    const CurveResult* canonical = result.find(Curve::canonical);
    const TimeWindow search{0.0, 0.5 * config.horizon};
    if (canonical) {
        if (const auto* tr = result.find(Curve::time_reversed)) {
            result.crossing_time_reversed =
                detect_mpemba_crossing(canonical->trajectory, tr->trajectory);
            result.delay_time_reversed =
                estimate_delay(canonical->trajectory, tr->trajectory, search);
        }
        if (const auto* dk = result.find(Curve::dark)) {
            result.crossing_dark = detect_mpemba_crossing(canonical->trajectory, dk->trajectory);
            result.delay_dark = estimate_delay(canonical->trajectory, dk->trajectory, search);
        }
    }
    return result;
}

namespace {

std::string csv_row(double t, const std::array<std::optional<double>, 3>& d) {
    std::string row = io::format_double(t);
    for (const auto& v : d) {
        row += ",";
        if (v) row += io::format_double(*v);
    }
    return row + "\n";
}

const char* csv_header = "t,D_canonical,D_time_reversed,D_dark\n";

const Trajectory& any_trajectory(const ExperimentResult& r) {
    if (r.curves.empty()) throw ConfigError("experiment produced no curves");
    return r.curves.front().trajectory;
}

double interpolate(const Trajectory& traj, double t) {
    const double x = t / traj.sample_step;
    const auto lo = std::min(static_cast<std::size_t>(std::floor(x)), traj.size() - 2);
    const double frac = std::clamp(x - static_cast<double>(lo), 0.0, 1.0);
    return (1.0 - frac) * traj.distances[lo] + frac * traj.distances[lo + 1];
}

json report_json(const MpembaReport& r) {
    json j;
    j["d1_initial"] = r.d1_initial;
    j["d2_initial"] = r.d2_initial;
    j["farther"] = r.farther;
    j["crossing_times"] = r.crossing_times;
    j["persistent_crossing"] = r.persistent_crossing ? json(*r.persistent_crossing) : json();
    j["verdict"] = std::string(to_string(r.verdict));
    j["mpemba"] = r.verdict == MpembaVerdict::mpemba;
    return j;
}

} // namespace

std::string curves_csv(const ExperimentResult& result) {
    const Trajectory& grid = any_trajectory(result);
    std::string out = csv_header;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::array<std::optional<double>, 3> d;
        for (const auto& c : result.curves) {
            d[static_cast<std::size_t>(c.curve)] = c.trajectory.distances[i];
        }
        out += csv_row(grid.times[i], d);
    }
    return out;
}

std::string curves_log_csv(const ExperimentResult& result, int points) {
    const Trajectory& grid = any_trajectory(result);
    std::string out = csv_header;
    if (grid.size() < 2 || points < 2) return out;
    const double t0 = grid.sample_step;
    const double t1 = grid.times.back();
    for (int k = 0; k < points; ++k) {
        const double t = t0 * std::pow(t1 / t0, static_cast<double>(k) / (points - 1));
        std::array<std::optional<double>, 3> d;
        for (const auto& c : result.curves) {
            d[static_cast<std::size_t>(c.curve)] = interpolate(c.trajectory, t);
        }
        out += csv_row(t, d);
    }
    return out;
}

std::string summary_json(const ExperimentResult& r) {
    const ModelParams p = r.config.params();
    json s;
    s["schema_version"] = summary_schema_version;
    s["params"] = {{"J", p.J},       {"g0", p.g0},           {"g0_over_J", r.config.g0_over_J},
                   {"omega0", p.omega0}, {"omega_c", p.omega_c}, {"M", p.M}};
    json curves_cfg = json::array();
    for (Curve c : r.config.curves) curves_cfg.push_back(std::string(curve_name(c)));
    s["config"] = {{"horizon", r.config.horizon}, {"sample_step", r.config.sample_step},
                   {"t_f", r.config.t_f},         {"L", r.config.L},
                   {"tol", r.config.tol},         {"curves", curves_cfg}};
    s["guard"] = {{"passed", r.guard.passed},
                  {"overridden", r.guard_overridden},
                  {"M", r.guard.M},
                  {"required_M", r.guard.required_M},
                  {"margin_sites", r.guard.margin_sites},
                  {"horizon", r.guard.horizon},
                  {"reflection_return_time", r.guard.reflection_return_time}};
    if (r.markov) {
        s["markov"] = {{"gamma", r.markov->gamma},
                       {"delta", r.markov->delta},
                       {"k0", r.markov->k0},
                       {"v_g", r.markov->v_g}};
    } else {
        s["markov"] = nullptr;
    }
    const auto advisory = p.weak_coupling_advisory();
    s["advisory"] = advisory ? json(*advisory) : json();

    json curves = json::object();
    double norm_max = 0.0;
    double energy_max = 0.0;
    for (const auto& c : r.curves) {
        const auto& t = c.trajectory;
        json cj;
        cj["d_initial"] = t.distances.front();
        cj["d_max"] = *std::max_element(t.distances.begin(), t.distances.end());
        cj["initial_slope"] = c.initial_slope;
        cj["contractive"] = c.contractive;
        cj["max_norm_drift"] = t.max_norm_drift;
        cj["max_energy_drift"] = t.max_energy_drift;
        if (c.fit) {
            cj["gamma_fit"] = {{"gamma_fit", c.fit->gamma_fit},
                               {"window", {c.fit->window.begin, c.fit->window.end}},
                               {"residual", c.fit->residual},
                               {"samples", c.fit->samples}};
        } else {
            cj["gamma_fit"] = nullptr;
            cj["fit_note"] = c.fit_note;
        }
        curves[std::string(curve_name(c.curve))] = std::move(cj);
        norm_max = std::max(norm_max, t.max_norm_drift);
        energy_max = std::max(energy_max, t.max_energy_drift);
    }
    s["curves"] = std::move(curves);
    s["norm_drift_max"] = norm_max;
    s["energy_drift_max"] = energy_max;

    json crossings = json::object();
    if (r.crossing_time_reversed) {
        crossings["canonical_vs_time_reversed"] = report_json(*r.crossing_time_reversed);
    }
    if (r.crossing_dark) crossings["canonical_vs_dark"] = report_json(*r.crossing_dark);
    s["crossings"] = std::move(crossings);
    s["crossing_note"] =
        "verdicts use persistence of the ordering up to the horizon; asymptotic claims are "
        "provisional";

    json delays = json::object();
    if (r.delay_time_reversed) delays["time_reversed"] = *r.delay_time_reversed;
    if (r.delay_dark) delays["dark"] = *r.delay_dark;
    s["delays"] = std::move(delays);
    return s.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options) {
    ExperimentResult result = compute_experiment(config, options);
    std::filesystem::create_directories(out_dir / "states");
    io::write_text(out_dir / "curves.csv", curves_csv(result));
    io::write_text(out_dir / "curves_log.csv", curves_log_csv(result));
    io::write_text(out_dir / "summary.json", summary_json(result));
    for (const auto& c : result.curves) {
        io::save_state(out_dir / "states" / (std::string(curve_name(c.curve)) + ".json"),
                       c.initial);
    }
    return result;
}

} // namespace mpemba

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mpemba/excitation_state.hpp"
#include "mpemba/model.hpp"
#include "mpemba/propagate.hpp"

namespace mpemba {

// Trace distance to the zero-temperature equilibrium |g><g|; equals |c_a|^2.
double trace_distance(const ExcitationState& state);

struct ReducedDensity {
    double p_excited{0.0};
    double p_ground{1.0};
};

ReducedDensity reduced_density(const ExcitationState& state);

// dD/dt at t = 0: 2 Im{ conj(c_a) g0 q_0 }.
double initial_slope(const ExcitationState& state, const ModelParams& params);

struct TimeWindow {
    double begin{0.0};
    double end{0.0};
};

struct DecayFit {
    double gamma_fit{0.0};
    TimeWindow window;
    double residual{0.0};  // RMS of the log-linear fit
    std::size_t samples{0};
};

// Least-squares slope of ln D over the window, negated.
DecayFit fit_decay_rate(const Trajectory& traj, TimeWindow window);

enum class MpembaVerdict { mpemba, no_mpemba, inconclusive_at_horizon, not_applicable };

std::string_view to_string(MpembaVerdict v);

struct MpembaReport {
    double d1_initial{0.0};
    double d2_initial{0.0};
    // 1 or 2: which input starts farther from equilibrium; 0 if neither does.
    int farther{0};
    std::vector<double> crossing_times;
    std::optional<double> persistent_crossing;
    MpembaVerdict verdict{MpembaVerdict::not_applicable};
};

inline constexpr double default_crossing_eps = 1e-6;

// Crossings of D_far - D_near, with |diff| <= eps * max(D1, D2, eps) treated as a tie.
// The crossing is persistent when every later sample has D_far < D_near beyond that
// band. Inputs are order-agnostic: swapping them mirrors d1/d2 and `farther`.
MpembaReport detect_mpemba_crossing(const Trajectory& traj1, const Trajectory& traj2,
                                    double eps = default_crossing_eps);

// Shift s minimising mean (D_delayed(t) - D_reference(t - s))^2 over the overlap,
// searched on the sample grid within range and refined by a parabola.
double estimate_delay(const Trajectory& reference, const Trajectory& delayed, TimeWindow range);

// Contractivity: D(t) <= D(0) + slack at every sample.
bool is_monotone_contractive(const Trajectory& traj, double slack = 0.0);

} // namespace mpemba

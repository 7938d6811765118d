#include "mpemba/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpemba/errors.hpp"

namespace mpemba {

double trace_distance(const ExcitationState& state) {
    return std::min(std::norm(state.atom_amp()), 1.0);
}

ReducedDensity reduced_density(const ExcitationState& state) {
    const double pe = trace_distance(state);
    return {pe, 1.0 - pe};
}

double initial_slope(const ExcitationState& state, const ModelParams& params) {
    return 2.0 * (std::conj(state.atom_amp()) * params.g0 * state.field(0)).imag();
}

DecayFit fit_decay_rate(const Trajectory& traj, TimeWindow window) {
    if (traj.times.empty() || window.begin < traj.times.front() - 1e-12 ||
        window.end > traj.times.back() + 1e-12 || !(window.end > window.begin)) {
        std::ostringstream os;
        os << "fit window [" << window.begin << ", " << window.end
           << "] is outside the trajectory";
        throw ConfigError(os.str());
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < window.begin - 1e-12 || t > window.end + 1e-12) continue;
        const double d = traj.distances[i];
        if (!(d > 0.0)) {
            std::ostringstream os;
            os << "non-positive distance " << d << " at t=" << t << " inside fit window";
            throw ConfigError(os.str());
        }
        const double y = std::log(d);
        pts.emplace_back(t, y);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 10) throw ConfigError("fit window must contain at least 10 samples");
    const double nn = static_cast<double>(n);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nn;
    double ss = 0.0;
    for (auto [t, y] : pts) {
        const double r = y - (intercept + slope * t);
        ss += r * r;
    }
    return {-slope, window, std::sqrt(ss / nn), n};
}

std::string_view to_string(MpembaVerdict v) {
    switch (v) {
        case MpembaVerdict::mpemba: return "mpemba";
        case MpembaVerdict::no_mpemba: return "no_mpemba";
        case MpembaVerdict::inconclusive_at_horizon: return "inconclusive_at_horizon";
        case MpembaVerdict::not_applicable: return "not_applicable";
    }
    return "unknown";
}

namespace {

void require_same_grid(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw ConfigError("trajectories have different grid lengths");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > 1e-9 * std::max(1.0, std::abs(a.times[i]))) {
            throw ConfigError("trajectories have mismatched time grids");
        }
    }
}

} // namespace

MpembaReport detect_mpemba_crossing(const Trajectory& traj1, const Trajectory& traj2,
                                    double eps) {
    require_same_grid(traj1, traj2);
    MpembaReport rep;
    if (traj1.size() == 0) return rep;
    rep.d1_initial = traj1.distances.front();
    rep.d2_initial = traj2.distances.front();
    if (rep.d1_initial > rep.d2_initial + eps) {
        rep.farther = 1;
    } else if (rep.d2_initial > rep.d1_initial + eps) {
        rep.farther = 2;
    } else {
        return rep;
    }

    const auto& far = rep.farther == 1 ? traj1 : traj2;
    const auto& near = rep.farther == 1 ? traj2 : traj1;
    const std::size_t n = far.size();
    std::vector<double> diff(n);
    std::vector<int> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = far.distances[i];
        const double b = near.distances[i];
        diff[i] = a - b;
        const double band = eps * std::max({a, b, eps});
        sign[i] = diff[i] > band ? 1 : (diff[i] < -band ? -1 : 0);
    }

    int last_sign = sign[0];
    std::size_t last_signed = 0;
    std::size_t last_change = 0;  // index where the most recent sign was established
    for (std::size_t j = 1; j < n; ++j) {
        if (sign[j] == 0 || sign[j] == last_sign) {
            if (sign[j] != 0) last_signed = j;
            continue;
        }
        // Earliest raw sign change (or exact zero) between last_signed and j.
        double t_cross = far.times[j];
        for (std::size_t i = last_signed; i < j; ++i) {
            if (diff[i + 1] == 0.0) {
                t_cross = far.times[i + 1];
                break;
            }
            if ((diff[i] > 0.0) != (diff[i + 1] > 0.0)) {
                const double frac = diff[i] / (diff[i] - diff[i + 1]);
                t_cross = far.times[i] + frac * (far.times[i + 1] - far.times[i]);
                break;
            }
        }
        rep.crossing_times.push_back(t_cross);
        last_sign = sign[j];
        last_signed = j;
        last_change = j;
    }

    if (!rep.crossing_times.empty() && last_sign == -1) {
        bool strict = true;
        for (std::size_t k = last_change; k < n; ++k) {
            if (sign[k] != -1) {
                strict = false;
                break;
            }
        }
        if (strict) rep.persistent_crossing = rep.crossing_times.back();
    }

    if (!rep.crossing_times.empty() && last_change + 5 >= n - 1) {
        rep.verdict = MpembaVerdict::inconclusive_at_horizon;
    } else if (rep.persistent_crossing) {
        rep.verdict = MpembaVerdict::mpemba;
    } else {
        rep.verdict = MpembaVerdict::no_mpemba;
    }
    return rep;
}

double estimate_delay(const Trajectory& reference, const Trajectory& delayed, TimeWindow range) {
    if (reference.size() < 2 || delayed.size() < 2) {
        throw ConfigError("trajectories too short for delay estimation");
    }
    const double h = reference.sample_step;
    if (std::abs(delayed.sample_step - h) > 1e-12 * h) {
        throw ConfigError("delay estimation needs equal sample steps");
    }
    if (range.end < range.begin) throw ConfigError("delay search range is empty");

    const long m_lo = std::max(0L, static_cast<long>(std::ceil(range.begin / h - 1e-9)));
    const long m_hi = static_cast<long>(std::floor(range.end / h + 1e-9));
    const long n_del = static_cast<long>(delayed.size());
    const long n_ref = static_cast<long>(reference.size());

    auto mse = [&](long m) -> double {
        double acc = 0.0;
        long count = 0;
        for (long i = m; i < n_del && i - m < n_ref; ++i) {
            const double d = delayed.distances[static_cast<std::size_t>(i)] -
                             reference.distances[static_cast<std::size_t>(i - m)];
            acc += d * d;
            ++count;
        }
        return count > 0 ? acc / static_cast<double>(count)
                         : std::numeric_limits<double>::quiet_NaN();
    };

    long best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (long m = m_lo; m <= m_hi; ++m) {
        const double v = mse(m);
        if (std::isnan(v)) continue;
        if (v < best_val) {
            best_val = v;
            best = m;
        }
    }
    if (best < 0) throw ConfigError("delay search range has no overlap between trajectories");

    double shift = static_cast<double>(best);
    if (best > m_lo && best < m_hi) {
        const double fm = mse(best - 1);
        const double fp = mse(best + 1);
        const double curvature = fm - 2.0 * best_val + fp;
        if (!std::isnan(fm) && !std::isnan(fp) && curvature > 0.0) {
            shift += 0.5 * (fm - fp) / curvature;
        }
    }
    return shift * h;
}

bool is_monotone_contractive(const Trajectory& traj, double slack) {
    if (traj.size() == 0) return true;
    const double d0 = traj.distances.front();
    return std::all_of(traj.distances.begin(), traj.distances.end(),
                       [&](double d) { return d <= d0 + slack; });
}

} // namespace mpemba

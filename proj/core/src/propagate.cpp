#include "mpemba/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "mpemba/errors.hpp"

namespace mpemba {

namespace {

// a * dt per internal step; keeps the expansion order modest.
constexpr double max_scaled_step = 20.0;
constexpr std::size_t max_order = 4096;

double bessel_j(int order, double x) {
    // J_k(-x) = (-1)^k J_k(x)
    const double v = std::cyl_bessel_j(static_cast<double>(order), std::abs(x));
    return (x < 0.0 && (order % 2 != 0)) ? -v : v;
}

int steps_on_grid(double horizon, double step) {
    return static_cast<int>(std::floor(horizon / step + 1e-9));
}

} // namespace

GuardReport check_truncation(const ModelParams& params, double horizon) {
    GuardReport r;
    r.M = params.M;
    r.horizon = horizon;
    const double light_cone = 2.0 * params.J * std::max(horizon, 0.0);
    r.required_M = static_cast<int>(std::ceil(light_cone - 1e-9)) + guard_margin_sites;
    r.margin_sites = params.M - r.required_M;
    r.passed = r.margin_sites >= 0;
    r.reflection_return_time =
        params.J > 0.0 ? params.M / params.J : std::numeric_limits<double>::infinity();
    return r;
}

ChebyshevPropagator::ChebyshevPropagator(const Hamiltonian& h, double dt, double tol)
    : matrix_(h.matrix()), dt_(dt) {
    auto [lo, hi] = h.spectral_bounds();
    centre_ = 0.5 * (lo + hi);
    half_width_ = std::max(0.5 * (hi - lo) * (1.0 + 1e-3), 1e-8);
    phase_ = std::polar(1.0, -centre_ * dt_);

    const double x = half_width_ * dt_;
    const double threshold = std::max(1e-2 * tol * std::abs(dt_), 1e-300);
    const cplx minus_i{0.0, -1.0};
    cplx ipow{1.0, 0.0};
    int below = 0;
    for (std::size_t k = 0; k < max_order; ++k) {
        const double jk = bessel_j(static_cast<int>(k), x);
        coefficients_.push_back((k == 0 ? 1.0 : 2.0) * ipow * jk);
        ipow *= minus_i;
        if (static_cast<double>(k) > std::abs(x) && std::abs(jk) < threshold) {
            if (++below == 2) return;
        } else {
            below = 0;
        }
    }
    std::ostringstream os;
    os << "Chebyshev expansion did not converge within " << max_order << " terms (dt=" << dt_
       << ", tol=" << tol << ")";
    throw ToleranceError(os.str());
}

void ChebyshevPropagator::apply(Eigen::VectorXcd& psi) const {
    const double inv = 1.0 / half_width_;
    auto scaled = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        return (matrix_ * v - centre_ * v) * inv;
    };

    Eigen::VectorXcd prev = psi;
    Eigen::VectorXcd curr = scaled(psi);
    Eigen::VectorXcd result = coefficients_[0] * prev;
    if (coefficients_.size() > 1) result += coefficients_[1] * curr;
    for (std::size_t k = 2; k < coefficients_.size(); ++k) {
        Eigen::VectorXcd next = 2.0 * scaled(curr) - prev;
        result += coefficients_[k] * next;
        prev.swap(curr);
        curr.swap(next);
    }
    psi = phase_ * result;
}

Eigen::VectorXcd advance(const Eigen::VectorXcd& psi, const Hamiltonian& h, double t,
                         double tol) {
    if (psi.size() != h.dimension()) {
        throw ConfigError("state dimension does not match Hamiltonian");
    }
    if (t == 0.0) return psi;
    auto [lo, hi] = h.spectral_bounds();
    const double width = 0.5 * (hi - lo);
    const int substeps =
        std::max(1, static_cast<int>(std::ceil(std::abs(t) * width / max_scaled_step)));
    const ChebyshevPropagator prop(h, t / substeps, tol);
    Eigen::VectorXcd out = psi;
    for (int s = 0; s < substeps; ++s) prop.apply(out);
    return out;
}

ExcitationState advance(const ExcitationState& state, const Hamiltonian& h, double t,
                        double tol) {
    return ExcitationState::unchecked_from_vector(advance(state.to_vector(), h, t, tol));
}

Trajectory evolve(const ExcitationState& state, const Hamiltonian& h,
                  const EvolveOptions& options) {
    const ModelParams& params = h.params();
    if (state.M() != params.M) {
        throw ConfigError("state lattice size does not match Hamiltonian");
    }
    if (!(options.horizon > 0.0)) throw ConfigError("horizon must be > 0");
    if (!(options.sample_step > 0.0)) throw ConfigError("sample_step must be > 0");
    if (!(options.tol > 0.0)) throw ConfigError("tol must be > 0");
    if (std::abs(state.norm_squared() - 1.0) > ExcitationState::norm_tolerance) {
        throw ConfigError("initial state must be normalized");
    }

    Trajectory traj;
    traj.params = params;
    traj.sample_step = options.sample_step;
    traj.guard = check_truncation(params, options.horizon);
    if (!traj.guard.passed) {
        if (!options.override_guard) {
            std::ostringstream os;
            os << "light-cone guard failed: M=" << params.M << " but horizon "
               << options.horizon << " requires M >= " << traj.guard.required_M;
            throw GuardError(os.str());
        }
        traj.guard_overridden = true;
    }

    const int n_steps = steps_on_grid(options.horizon, options.sample_step);
    std::vector<int> snapshot_index;
    for (double ts : options.snapshot_times) {
        const double idx = ts / options.sample_step;
        const double rounded = std::round(idx);
        if (ts < 0.0 || rounded > n_steps ||
            std::abs(idx - rounded) > 1e-9 * std::max(1.0, idx)) {
            std::ostringstream os;
            os << "snapshot time " << ts << " is not on the sample grid";
            throw ConfigError(os.str());
        }
        snapshot_index.push_back(static_cast<int>(rounded));
    }

    auto [lo, hi] = h.spectral_bounds();
    const double width = 0.5 * (hi - lo);
    const int substeps = std::max(
        1, static_cast<int>(std::ceil(options.sample_step * width / max_scaled_step)));
    const ChebyshevPropagator prop(h, options.sample_step / substeps, options.tol);

    Eigen::VectorXcd psi = state.to_vector();
    const double e0 = h.expectation(psi);
    const double energy_scale = std::max({std::abs(e0), std::abs(lo), std::abs(hi)});

    traj.times.reserve(static_cast<std::size_t>(n_steps + 1));
    traj.distances.reserve(static_cast<std::size_t>(n_steps + 1));
    traj.atom_amplitudes.reserve(static_cast<std::size_t>(n_steps + 1));

    for (int i = 0; i <= n_steps; ++i) {
        if (i > 0) {
            for (int s = 0; s < substeps; ++s) prop.apply(psi);
        }
        const double t = i * options.sample_step;
        const double norm_drift = std::abs(psi.squaredNorm() - 1.0);
        if (norm_drift > options.tol * (1.0 + t * params.J)) {
            std::ostringstream os;
            os << "norm drift " << norm_drift << " at t=" << t << " exceeds tolerance bound";
            throw ToleranceError(os.str());
        }
        traj.max_norm_drift = std::max(traj.max_norm_drift, norm_drift);
        traj.max_energy_drift =
            std::max(traj.max_energy_drift, std::abs(h.expectation(psi) - e0) / energy_scale);

        traj.times.push_back(t);
        traj.atom_amplitudes.push_back(psi[0]);
        // |c_a|^2 can exceed 1 by roundoff
        traj.distances.push_back(std::min(std::norm(psi[0]), 1.0));
        for (std::size_t s = 0; s < snapshot_index.size(); ++s) {
            if (snapshot_index[s] == i) {
                traj.snapshots.push_back({t, ExcitationState::unchecked_from_vector(psi)});
            }
        }
    }
    return traj;
}

std::vector<Trajectory> evolve_batch(std::span<const ExcitationState> states,
                                     const Hamiltonian& h, const EvolveOptions& options) {
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(states.size());
    for (const auto& s : states) {
        jobs.push_back(std::async(std::launch::async,
                                  [&h, &options, &s] { return evolve(s, h, options); }));
    }
    std::vector<Trajectory> out;
    out.reserve(states.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

} // namespace mpemba

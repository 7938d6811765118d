// propagate.hpp — Norm-conserving evolution in the single-excitation sector.
//
// Propagation uses a Chebyshev expansion of exp(-i H dt) built on sparse
// matrix-vector products only. The contract is the drift bound
//
//     | ||psi(t)||^2 - 1 | <= tol * (1 + t J)
//
// checked at every sample; the scheme itself is an implementation detail.

#pragma once

#include <span>
#include <vector>

#include "mpemba/excitation_state.hpp"
#include "mpemba/model.hpp"

namespace mpemba {

struct GuardReport {
    bool passed{false};
    int M{0};
    int required_M{0};
    int margin_sites{0};             // M - required_M, negative on failure
    double horizon{0.0};
    double reflection_return_time{0.0};  // M / J, earliest echo at the emitter
};

// Light-cone guard: passes iff M >= ceil(2 J horizon) + 8.
GuardReport check_truncation(const ModelParams& params, double horizon);

inline constexpr int guard_margin_sites = 8;

struct EvolveOptions {
    double horizon{100.0};
    double sample_step{0.1};   // in units of 1/J when J = 1
    double tol{1e-10};         // per unit time
    std::vector<double> snapshot_times;  // must lie on the sample grid
    bool override_guard{false};
};

struct Snapshot {
    double time{0.0};
    ExcitationState state;
};

struct Trajectory {
    ModelParams params;
    double sample_step{0.0};
    std::vector<double> times;
    std::vector<double> distances;       // D(t) = |c_a(t)|^2
    std::vector<cplx> atom_amplitudes;   // c_a(t)
    std::vector<Snapshot> snapshots;
    double max_norm_drift{0.0};
    double max_energy_drift{0.0};        // relative to max(|E0|, spectral radius)
    GuardReport guard;
    bool guard_overridden{false};

    std::size_t size() const noexcept { return times.size(); }
};

// Fixed-step Chebyshev propagator for exp(-i H dt). dt may be negative.
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const Hamiltonian& h, double dt, double tol);

    void apply(Eigen::VectorXcd& psi) const;

    double dt() const noexcept { return dt_; }
    std::size_t order() const noexcept { return coefficients_.size(); }

private:
    SparseMatrixC matrix_;
    double centre_{0.0};
    double half_width_{1.0};
    double dt_{0.0};
    cplx phase_;
    std::vector<cplx> coefficients_;
};

// psi(t) = exp(-i H t) psi(0) for any real t. No guard check.
Eigen::VectorXcd advance(const Eigen::VectorXcd& psi, const Hamiltonian& h, double t,
                         double tol = 1e-10);
ExcitationState advance(const ExcitationState& state, const Hamiltonian& h, double t,
                        double tol = 1e-10);

// Samples at multiples of sample_step in [0, horizon].
// Throws GuardError when the light-cone guard fails and is not overridden,
// ToleranceError when the drift bound cannot be met.
Trajectory evolve(const ExcitationState& state, const Hamiltonian& h,
                  const EvolveOptions& options);

// Independent trajectories evolved concurrently; result order matches input.
std::vector<Trajectory> evolve_batch(std::span<const ExcitationState> states,
                                     const Hamiltonian& h, const EvolveOptions& options);

} // namespace mpemba

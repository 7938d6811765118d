// symmetry.hpp — Time-reversal checks in the single-excitation pure-state sector.
//
// With K = complex conjugation and H K = K H (real symmetric H), the
// propagator satisfies U_{-t} = K U_t K. Everything here is a numerical
// certificate of that identity.

#pragma once

#include <span>

#include "mpemba/excitation_state.hpp"
#include "mpemba/model.hpp"

namespace mpemba {

bool is_time_reversal_symmetric(const Hamiltonian& h, double tol = 1e-12);

struct RoundtripReport {
    double residual{0.0};
    double threshold{0.0};  // 10 * propagator tolerance
    bool passed{false};
};

// psi(0) canonical -> U_{t_f} -> K -> U_{t_f} -> K, compared with psi(0).
// Requires the light-cone guard for horizon 2 t_f.
RoundtripReport reversal_roundtrip_check(const Hamiltonian& h, double t_f, double tol = 1e-10);
RoundtripReport reversal_roundtrip_check(const ModelParams& params, double t_f,
                                         double tol = 1e-10);

// max over times of | |c_a(-t)| - |c_a(t)| | for a real initial state.
double backward_forward_asymmetry(const Hamiltonian& h, const ExcitationState& real_state,
                                  std::span<const double> times, double tol = 1e-10);

} // namespace mpemba

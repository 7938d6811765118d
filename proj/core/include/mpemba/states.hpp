// states.hpp — Initial-condition families and Wannier <-> Bloch transforms.
//
// Transform convention:
//   phi(k)  = (1/sqrt(2 pi)) sum_l q_l exp(i k l)
//   q_l     = (1/sqrt(2 pi)) int dk phi(k) exp(-i k l)
// The integral is the periodic trapezoid rule on k_i = -pi + 2 pi i / N_k.

#pragma once

#include <vector>

#include "mpemba/excitation_state.hpp"
#include "mpemba/model.hpp"

namespace mpemba {

struct BlochField {
    std::vector<double> k_grid;
    std::vector<cplx> amps;

    std::size_t size() const noexcept { return k_grid.size(); }
    double weight() const noexcept;  // 2 pi / N_k
};

// Atom excited, field in vacuum.
ExcitationState canonical_state(const ModelParams& params);

// Complex conjugation of every amplitude (time reversal K).
ExcitationState conjugate_state(const ExcitationState& state);

// Canonical state evolved for t_f, then conjugated. Evolving the result for t_f
// returns to the canonical state. Requires a time-reversal symmetric Hamiltonian
// and a lattice that passes the light-cone guard for t_f.
ExcitationState time_reversed_state(const Hamiltonian& h, double t_f, double solver_tol = 1e-10);
ExcitationState time_reversed_state(const ModelParams& params, double t_f,
                                    double solver_tol = 1e-10);

// Quasi-dark atom-photon superposition on even sites |l| <= 2L:
//   c_a = 1 / sqrt(1 + (2L+1) J^2/g0^2) (real, positive)
//   Q_{2m} = (-1)^m Q_0,  Q_0 = -c_a J / g0.
// Requires 2L <= M - 8 and g0 > 0.
ExcitationState dark_state(const ModelParams& params, int L);

struct CustomState {
    ExcitationState state;
    double normalization{1.0};  // factor applied to the raw amplitudes
};

// Arbitrary single-excitation amplitudes, rescaled to unit norm.
CustomState custom_state(cplx atom_amp, std::vector<cplx> field_amps);

// Requires N_k >= 2(2M+1).
BlochField wannier_to_bloch(const ExcitationState& state, int n_k);
BlochField wannier_to_bloch(std::span<const cplx> field_amps, int n_k);
std::vector<cplx> bloch_to_wannier(const BlochField& field, int M);

} // namespace mpemba

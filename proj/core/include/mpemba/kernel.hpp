// kernel.hpp — Memory-kernel (Wigner-Weisskopf) route to the atom amplitude.
//
// Eliminating the field gives the Volterra integro-differential equation
//
//     dc_a/dt = F(t) - int_0^t G(t - t') c_a(t') dt'
//
//     G(tau) = int dk |g(k)|^2 exp(-i Omega(k) tau)
//     F(t)   = -i int dk g(k) phi_0(k) exp(-i Omega(k) t)
//
// Both integrals are periodic-trapezoid Brillouin-zone sums, refined by
// doubling N_k until successive results agree.

#pragma once

#include <optional>
#include <vector>

#include "mpemba/excitation_state.hpp"
#include "mpemba/model.hpp"

namespace mpemba {

// t_i = i * step, i = 0 .. count-1
struct UniformGrid {
    double step{0.01};
    int count{0};

    double at(int i) const noexcept { return i * step; }
    double last() const noexcept { return (count - 1) * step; }
    static UniformGrid spanning(double t_max, double step);
};

struct QuadratureOptions {
    int max_n_k{1 << 16};
    double convergence_tol{1e-10};
};

struct KernelData {
    UniformGrid tau_grid;
    std::vector<cplx> values;
    int n_k{0};                         // grid size after refinement
    std::optional<double> memory_time;  // first tau with |G| < 1% of |G(0)|
};

struct ForcingData {
    UniformGrid t_grid;
    std::vector<cplx> values;
    int n_k{0};
};

struct MarkovData {
    double gamma{0.0};
    double delta{0.0};  // Lamb shift
    double k0{0.0};
    double v_g{0.0};
};

KernelData memory_kernel(const ModelParams& params, double tau_max, double step, int n_k,
                         const QuadratureOptions& options = {});

ForcingData forcing_term(const ModelParams& params, const ExcitationState& initial,
                         const UniformGrid& t_grid, int n_k = 0,
                         const QuadratureOptions& options = {});

struct VolterraOptions {
    // Throw ToleranceError when the error estimate exceeds this.
    std::optional<double> tol;
};

struct VolterraSolution {
    std::vector<double> times;
    std::vector<cplx> amplitudes;
    // Richardson estimate of the step-h error: max |c_h - c_2h| / 3.
    double error_estimate{0.0};
};

// Product-trapezoid scheme, second order, O(N^2) in the grid length.
// Kernel and forcing must be sampled at least as finely as t_grid and cover it;
// off-grid points are linearly interpolated.
VolterraSolution solve_volterra(cplx c_a0, const KernelData& kernel, const ForcingData& forcing,
                                const UniformGrid& t_grid, const VolterraOptions& options = {});

// Markov limit: the memory integral replaced by (Gamma/2 + i Delta) c_a(t).
VolterraSolution solve_volterra(cplx c_a0, const MarkovData& markov, const ForcingData& forcing,
                                const UniformGrid& t_grid);

// Gamma from the delta-function roots of Omega(k) with Jacobian 1/v_g;
// Delta by principal-value quadrature with symmetric excision of width pv_window
// around +-k0, Richardson-extrapolated between pv_window and pv_window/2.
MarkovData markov_rate_and_shift(const ModelParams& params, double pv_window = 1e-3);

// A(t) = exp(-(Gamma/2 + i Delta) t)
cplx markov_decay(const MarkovData& markov, double t);

} // namespace mpemba

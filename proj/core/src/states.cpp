#include "mpemba/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mpemba/errors.hpp"
#include "mpemba/propagate.hpp"

namespace mpemba {

namespace {
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}

double BlochField::weight() const noexcept {
    return 2.0 * std::numbers::pi / static_cast<double>(k_grid.size());
}

ExcitationState canonical_state(const ModelParams& params) {
    params.validate();
    return ExcitationState::make(1.0, std::vector<cplx>(static_cast<std::size_t>(params.sites())));
}

ExcitationState conjugate_state(const ExcitationState& state) {
    std::vector<cplx> field(state.field_amps().begin(), state.field_amps().end());
    for (auto& q : field) q = std::conj(q);
    return ExcitationState::unchecked(std::conj(state.atom_amp()), std::move(field));
}

ExcitationState time_reversed_state(const Hamiltonian& h, double t_f, double solver_tol) {
    const ModelParams& params = h.params();
    if (t_f < 0.0) throw ConfigError("t_f must be >= 0");
    if (!h.is_real_symmetric(1e-14)) {
        throw ConfigError("time-reversed state requires a real symmetric Hamiltonian");
    }
    const GuardReport guard = check_truncation(params, t_f);
    if (!guard.passed) {
        std::ostringstream os;
        os << "light-cone guard failed for t_f=" << t_f << ": M=" << params.M
           << " but M >= " << guard.required_M << " is required";
        throw GuardError(os.str());
    }
    const ExcitationState start = canonical_state(params);
    if (t_f == 0.0) return start;
    return conjugate_state(advance(start, h, t_f, solver_tol));
}

ExcitationState time_reversed_state(const ModelParams& params, double t_f, double solver_tol) {
    return time_reversed_state(build_hamiltonian(params), t_f, solver_tol);
}

ExcitationState dark_state(const ModelParams& params, int L) {
    params.validate();
    if (L < 0) throw ConfigError("dark state size L must be >= 0");
    if (!(params.g0 > 0.0)) throw ConfigError("dark state requires g0 > 0");
    if (2 * L > params.M - guard_margin_sites) {
        std::ostringstream os;
        os << "dark state L=" << L << " too large for M=" << params.M
           << " (needs 2L <= M - " << guard_margin_sites << ")";
        throw ConfigError(os.str());
    }
    const double ratio = params.J / params.g0;
    const double c_a = 1.0 / std::sqrt(1.0 + (2.0 * L + 1.0) * ratio * ratio);
    const double q0 = -c_a * ratio;

    std::vector<cplx> field(static_cast<std::size_t>(params.sites()));
    for (int m = -L; m <= L; ++m) {
        const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
        field[static_cast<std::size_t>(2 * m + params.M)] = sign * q0;
    }
    // Rescale away the ~1e-16 rounding of the closed-form normalization.
    auto raw = ExcitationState::unchecked(c_a, field);
    const double n = std::sqrt(raw.norm_squared());
    for (auto& q : field) q /= n;
    return ExcitationState::make(c_a / n, std::move(field));
}

CustomState custom_state(cplx atom_amp, std::vector<cplx> field_amps) {
    auto raw = ExcitationState::unchecked(atom_amp, std::move(field_amps));
    const double n2 = raw.norm_squared();
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw ConfigError("custom state amplitudes are all zero");
    }
    const double scale = 1.0 / std::sqrt(n2);
    std::vector<cplx> field(raw.field_amps().begin(), raw.field_amps().end());
    for (auto& q : field) q *= scale;
    return {ExcitationState::make(atom_amp * scale, std::move(field)), scale};
}

BlochField wannier_to_bloch(std::span<const cplx> field_amps, int n_k) {
    const int sites = static_cast<int>(field_amps.size());
    const int M = sites / 2;
    if (n_k < 2 * sites) {
        std::ostringstream os;
        os << "Bloch grid undersampled: N_k=" << n_k << " < 2(2M+1)=" << 2 * sites;
        throw ConfigError(os.str());
    }
    BlochField out;
    out.k_grid.resize(static_cast<std::size_t>(n_k));
    out.amps.assign(static_cast<std::size_t>(n_k), cplx{});
    const double dk = 2.0 * std::numbers::pi / n_k;
    for (int i = 0; i < n_k; ++i) {
        const double k = -std::numbers::pi + dk * i;
        out.k_grid[static_cast<std::size_t>(i)] = k;
        cplx acc{};
        for (int l = -M; l <= M; ++l) {
            const cplx q = field_amps[static_cast<std::size_t>(l + M)];
            if (q != cplx{}) acc += q * std::polar(1.0, k * l);
        }
        out.amps[static_cast<std::size_t>(i)] = inv_sqrt_2pi * acc;
    }
    return out;
}

BlochField wannier_to_bloch(const ExcitationState& state, int n_k) {
    return wannier_to_bloch(state.field_amps(), n_k);
}

std::vector<cplx> bloch_to_wannier(const BlochField& field, int M) {
    if (M < 1) throw ConfigError("M must be >= 1");
    const int n_k = static_cast<int>(field.size());
    if (n_k < 2 * (2 * M + 1)) throw ConfigError("Bloch grid undersampled for requested M");
    const double w = field.weight();
    std::vector<cplx> q(static_cast<std::size_t>(2 * M + 1));
    for (int l = -M; l <= M; ++l) {
        cplx acc{};
        for (int i = 0; i < n_k; ++i) {
            acc += field.amps[static_cast<std::size_t>(i)] *
                   std::polar(1.0, -field.k_grid[static_cast<std::size_t>(i)] * l);
        }
        q[static_cast<std::size_t>(l + M)] = inv_sqrt_2pi * w * acc;
    }
    return q;
}

} // namespace mpemba

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpemba/model.hpp"

namespace mpemba {

// Atom amplitude c_a plus 2M+1 Wannier field amplitudes q_l (l = -M..M).
// Public factories enforce |c_a|^2 + sum |q_l|^2 = 1 within 1e-12.
class ExcitationState {
public:
    static constexpr double norm_tolerance = 1e-12;

    static ExcitationState make(cplx atom_amp, std::vector<cplx> field_amps);
    static ExcitationState from_vector(const Eigen::VectorXcd& basis_vector);

    // No normalization check; for intermediate results of linear operations.
    static ExcitationState unchecked(cplx atom_amp, std::vector<cplx> field_amps);
    static ExcitationState unchecked_from_vector(const Eigen::VectorXcd& basis_vector);

    cplx atom_amp() const noexcept { return atom_; }
    std::span<const cplx> field_amps() const noexcept { return field_; }
    int M() const noexcept { return static_cast<int>(field_.size() / 2); }

    // q_l, zero outside -M..M.
    cplx field(int l) const noexcept;

    double norm_squared() const noexcept;

    // Basis-ordered vector [atom, l=-M..M].
    Eigen::VectorXcd to_vector() const;

    friend bool operator==(const ExcitationState&, const ExcitationState&) = default;

private:
    ExcitationState(cplx atom, std::vector<cplx> field);

    cplx atom_;
    std::vector<cplx> field_;
};

} // namespace mpemba

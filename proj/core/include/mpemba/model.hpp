// model.hpp — Coupled-cavity waveguide with an embedded two-level emitter.
//
// Single-excitation sector, rotating frame at the atom frequency omega0.
// Basis ordering is fixed for the whole library:
//
//   index 0          atom excited, field vacuum
//   index 1 + l + M  photon in cavity l, l = -M..M, atom in ground state
//
// The chain is truncated with hard walls at l = +-M.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace mpemba {

using cplx = std::complex<double>;

struct ModelParams {
    double omega0{0.0};   // atom transition frequency
    double omega_c{0.0};  // single-cavity resonance
    double J{1.0};        // hopping rate, > 0
    double g0{0.2};       // atom-cavity coupling, >= 0
    int M{1};             // lattice half-width, sites -M..M

    double detuning() const noexcept { return omega_c - omega0; }
    int sites() const noexcept { return 2 * M + 1; }
    int dimension() const noexcept { return 2 * M + 2; }

    // Throws ConfigError unless J > 0, M >= 1, g0 >= 0 and all values finite.
    void validate() const;

    // Non-empty when g0/J > 0.5, where golden-rule comparisons lose meaning.
    std::optional<std::string> weak_coupling_advisory() const;
};

// Index of site l in the ordered basis.
inline int site_index(const ModelParams& p, int l) noexcept { return 1 + l + p.M; }
inline constexpr int atom_index = 0;

using SparseMatrixC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class Hamiltonian {
public:
    Hamiltonian(ModelParams params, SparseMatrixC matrix);

    const ModelParams& params() const noexcept { return params_; }
    const SparseMatrixC& matrix() const noexcept { return matrix_; }
    int dimension() const noexcept { return static_cast<int>(matrix_.rows()); }

    cplx entry(int row, int col) const { return matrix_.coeff(row, col); }

    // Every entry real and the matrix symmetric, both within tol.
    bool is_real_symmetric(double tol) const;

    // Gershgorin enclosure of the spectrum (Hermitian matrices only).
    std::pair<double, double> spectral_bounds() const;

    // <psi|H|psi> for a basis-ordered vector.
    double expectation(const Eigen::VectorXcd& psi) const;

private:
    ModelParams params_;
    SparseMatrixC matrix_;
};

Hamiltonian build_hamiltonian(const ModelParams& params);

// Rotating-frame detuning Omega(k) = omega(k) - omega0 with omega(k) = omega_c - 2J cos k.
double dispersion(const ModelParams& params, double k);

// Flat spectral coupling g(k) = g0 / sqrt(2 pi).
double coupling_spectrum(const ModelParams& params);

// Resonant wavenumber k0 in (0, pi) with omega(+-k0) = omega0.
// Throws ResonanceOutsideBandError when |omega0 - omega_c| >= 2J.
double resonant_wavenumber(const ModelParams& params);

// Golden-rule decay rate 4 pi |g(k0)|^2 / v_g, v_g = 2J sin k0.
double fermi_golden_rule_rate(const ModelParams& params);

} // namespace mpemba

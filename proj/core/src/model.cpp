#include "mpemba/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mpemba/errors.hpp"

namespace mpemba {

void ModelParams::validate() const {
    if (!std::isfinite(omega0) || !std::isfinite(omega_c) || !std::isfinite(J) ||
        !std::isfinite(g0)) {
        throw ConfigError("model parameters must be finite");
    }
    if (!(J > 0.0)) throw ConfigError("hopping rate J must be > 0");
    if (M < 1) throw ConfigError("lattice half-width M must be >= 1");
    if (g0 < 0.0) throw ConfigError("coupling g0 must be >= 0");
}

std::optional<std::string> ModelParams::weak_coupling_advisory() const {
    if (g0 / J > 0.5) {
        std::ostringstream os;
        os << "g0/J = " << g0 / J
           << " exceeds 0.5; golden-rule comparisons assume weak coupling";
        return os.str();
    }
    return std::nullopt;
}

Hamiltonian::Hamiltonian(ModelParams params, SparseMatrixC matrix)
    : params_(params), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw ConfigError("Hamiltonian must be square");
    }
    if (matrix_.rows() != params_.dimension()) {
        throw ConfigError("Hamiltonian dimension does not match 2M+2");
    }
    matrix_.makeCompressed();
}

bool Hamiltonian::is_real_symmetric(double tol) const {
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        for (SparseMatrixC::InnerIterator it(matrix_, r); it; ++it) {
            if (std::abs(it.value().imag()) > tol) return false;
            const cplx mirror = matrix_.coeff(it.col(), it.row());
            if (std::abs(it.value() - mirror) > tol) return false;
        }
    }
    return true;
}

std::pair<double, double> Hamiltonian::spectral_bounds() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        double centre = 0.0;
        double radius = 0.0;
        for (SparseMatrixC::InnerIterator it(matrix_, r); it; ++it) {
            if (it.col() == r) {
                centre = it.value().real();
            } else {
                radius += std::abs(it.value());
            }
        }
        lo = std::min(lo, centre - radius);
        hi = std::max(hi, centre + radius);
    }
    return {lo, hi};
}

double Hamiltonian::expectation(const Eigen::VectorXcd& psi) const {
    return psi.dot(matrix_ * psi).real();
}

Hamiltonian build_hamiltonian(const ModelParams& params) {
    params.validate();
    const int dim = params.dimension();
    const double delta = params.detuning();

    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(static_cast<std::size_t>(3 * dim + 2));

    triplets.emplace_back(atom_index, atom_index, 0.0);
    for (int l = -params.M; l <= params.M; ++l) {
        const int i = site_index(params, l);
        triplets.emplace_back(i, i, delta);
        if (l < params.M) {
            triplets.emplace_back(i, i + 1, -params.J);
            triplets.emplace_back(i + 1, i, -params.J);
        }
    }
    const int s0 = site_index(params, 0);
    triplets.emplace_back(atom_index, s0, params.g0);
    triplets.emplace_back(s0, atom_index, params.g0);

    SparseMatrixC h(dim, dim);
    h.setFromTriplets(triplets.begin(), triplets.end());
    return Hamiltonian(params, std::move(h));
}

double dispersion(const ModelParams& params, double k) {
    return params.detuning() - 2.0 * params.J * std::cos(k);
}

double coupling_spectrum(const ModelParams& params) {
    return params.g0 / std::sqrt(2.0 * std::numbers::pi);
}

double resonant_wavenumber(const ModelParams& params) {
    const double c = params.detuning() / (2.0 * params.J);
    if (!(std::abs(c) < 1.0)) {
        std::ostringstream os;
        os << "resonance outside band: |omega0 - omega_c| = " << std::abs(params.detuning())
           << " >= 2J = " << 2.0 * params.J;
        throw ResonanceOutsideBandError(os.str());
    }
    return std::acos(c);
}

double fermi_golden_rule_rate(const ModelParams& params) {
    const double k0 = resonant_wavenumber(params);
    const double v_g = 2.0 * params.J * std::sin(k0);
    const double g = coupling_spectrum(params);
    return 4.0 * std::numbers::pi * g * g / v_g;
}

} // namespace mpemba

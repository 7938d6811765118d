#include "mpemba/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpemba/errors.hpp"
#include "mpemba/propagate.hpp"
#include "mpemba/states.hpp"

namespace mpemba {

bool is_time_reversal_symmetric(const Hamiltonian& h, double tol) {
    return h.is_real_symmetric(tol);
}

RoundtripReport reversal_roundtrip_check(const Hamiltonian& h, double t_f, double tol) {
    if (t_f < 0.0) throw ConfigError("t_f must be >= 0");
    const GuardReport guard = check_truncation(h.params(), 2.0 * t_f);
    if (!guard.passed) {
        std::ostringstream os;
        os << "light-cone guard failed for roundtrip horizon " << 2.0 * t_f
           << ": M=" << h.params().M << " but M >= " << guard.required_M << " is required";
        throw GuardError(os.str());
    }
    RoundtripReport rep;
    rep.threshold = 10.0 * tol;
    const Eigen::VectorXcd start = canonical_state(h.params()).to_vector();
    Eigen::VectorXcd psi = advance(start, h, t_f, tol).conjugate();
    psi = advance(psi, h, t_f, tol).conjugate();
    rep.residual = (psi - start).norm();
    rep.passed = rep.residual <= rep.threshold;
    return rep;
}

RoundtripReport reversal_roundtrip_check(const ModelParams& params, double t_f, double tol) {
    return reversal_roundtrip_check(build_hamiltonian(params), t_f, tol);
}

double backward_forward_asymmetry(const Hamiltonian& h, const ExcitationState& real_state,
                                  std::span<const double> times, double tol) {
    const Eigen::VectorXcd psi0 = real_state.to_vector();
    if (psi0.imag().cwiseAbs().maxCoeff() > 0.0) {
        throw ConfigError("backward/forward symmetry needs a real initial state");
    }
    double worst = 0.0;
    for (double t : times) {
        const double fwd = std::abs(advance(psi0, h, t, tol)[0]);
        const double bwd = std::abs(advance(psi0, h, -t, tol)[0]);
        worst = std::max(worst, std::abs(fwd - bwd));
    }
    return worst;
}

} // namespace mpemba

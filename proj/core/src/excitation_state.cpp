#include "mpemba/excitation_state.hpp"

#include <cmath>
#include <sstream>

#include "mpemba/errors.hpp"

namespace mpemba {

ExcitationState::ExcitationState(cplx atom, std::vector<cplx> field)
    : atom_(atom), field_(std::move(field)) {
    if (field_.size() < 3 || field_.size() % 2 == 0) {
        throw ConfigError("field amplitudes must have odd length 2M+1 with M >= 1");
    }
}

ExcitationState ExcitationState::make(cplx atom_amp, std::vector<cplx> field_amps) {
    ExcitationState s(atom_amp, std::move(field_amps));
    const double drift = std::abs(s.norm_squared() - 1.0);
    if (drift > norm_tolerance) {
        std::ostringstream os;
        os << "state is not normalized: |norm^2 - 1| = " << drift;
        throw ConfigError(os.str());
    }
    return s;
}

ExcitationState ExcitationState::unchecked(cplx atom_amp, std::vector<cplx> field_amps) {
    return ExcitationState(atom_amp, std::move(field_amps));
}

ExcitationState ExcitationState::from_vector(const Eigen::VectorXcd& v) {
    std::vector<cplx> field(v.data() + 1, v.data() + v.size());
    return make(v[0], std::move(field));
}

ExcitationState ExcitationState::unchecked_from_vector(const Eigen::VectorXcd& v) {
    std::vector<cplx> field(v.data() + 1, v.data() + v.size());
    return unchecked(v[0], std::move(field));
}

cplx ExcitationState::field(int l) const noexcept {
    const int m = M();
    if (l < -m || l > m) return {0.0, 0.0};
    return field_[static_cast<std::size_t>(l + m)];
}

double ExcitationState::norm_squared() const noexcept {
    double n = std::norm(atom_);
    for (const cplx& q : field_) n += std::norm(q);
    return n;
}

Eigen::VectorXcd ExcitationState::to_vector() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(field_.size() + 1));
    v[0] = atom_;
    for (std::size_t i = 0; i < field_.size(); ++i) {
        v[static_cast<Eigen::Index>(i + 1)] = field_[i];
    }
    return v;
}

} // namespace mpemba

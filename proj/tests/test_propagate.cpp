#include "doctest.h"

#include <cmath>
#include <random>

#include "mpemba/errors.hpp"
#include "mpemba/propagate.hpp"
#include "mpemba/states.hpp"
#include "oracles.hpp"

using namespace mpemba;

namespace {

ModelParams resonant(int M, double g0 = 0.2) {
    ModelParams p;
    p.J = 1.0;
    p.g0 = g0;
    p.M = M;
    return p;
}

ExcitationState random_state(int M, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> f(static_cast<std::size_t>(2 * M + 1));
    for (auto& q : f) q = {n(rng), n(rng)};
    return custom_state({n(rng), n(rng)}, f).state;
}

} // namespace

TEST_CASE("check_truncation examples") {
    auto r = check_truncation(resonant(260), 100.0);
    CHECK(r.passed);
    CHECK(r.required_M == 208);
    CHECK(r.margin_sites == 52);
    CHECK(r.reflection_return_time == doctest::Approx(260.0));

    CHECK_FALSE(check_truncation(resonant(100), 100.0).passed);

    auto edge = check_truncation(resonant(9), 0.4);
    CHECK(edge.passed);
    CHECK(edge.required_M == 9);
    CHECK_FALSE(check_truncation(resonant(8), 0.4).passed);
}

TEST_CASE("decoupled atom stays excited") {
    const auto p = resonant(30, 0.0);
    const auto traj = evolve(canonical_state(p), build_hamiltonian(p), {10.0, 0.1, 1e-10, {}, false});
    for (double d : traj.distances) CHECK(d == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-level Rabi limit without hopping") {
    // J = 0: the atom exchanges its excitation with cavity 0 only.
    ModelParams p = resonant(1, 0.2);
    p.J = 0.0;
    SparseMatrixC m(4, 4);
    m.insert(0, 2) = 0.2;
    m.insert(2, 0) = 0.2;
    const Hamiltonian h(p, m);
    EvolveOptions opt;
    opt.horizon = 20.0;
    opt.sample_step = std::numbers::pi / (2 * 0.2) / 50.0;
    opt.override_guard = true;
    const auto traj = evolve(canonical_state(resonant(1)), h, opt);
    CHECK(traj.guard_overridden);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double c = std::cos(0.2 * traj.times[i]);
        CHECK(traj.distances[i] == doctest::Approx(c * c).epsilon(1e-11));
    }
    CHECK(traj.distances[50] < 1e-20);
}

TEST_CASE("guard violation is an error unless overridden") {
    const auto p = resonant(20);
    const auto h = build_hamiltonian(p);
    CHECK_THROWS_AS(evolve(canonical_state(p), h, {20.0, 0.1, 1e-10, {}, false}), GuardError);
    EvolveOptions o{20.0, 0.1, 1e-10, {}, true};
    const auto traj = evolve(canonical_state(p), h, o);
    CHECK(traj.guard_overridden);
    CHECK_FALSE(traj.guard.passed);
}

TEST_CASE("unachievable tolerance is reported") {
    const auto p = resonant(30);
    EvolveOptions o{10.0, 0.1, 1e-19, {}, false};
    CHECK_THROWS_AS(evolve(canonical_state(p), build_hamiltonian(p), o), ToleranceError);
}

TEST_CASE("Chebyshev propagation matches dense eigendecomposition") {
    std::mt19937_64 rng(7);
    for (double detuning : {0.0, 0.6}) {
        ModelParams p = resonant(12, 0.35);
        p.omega_c = detuning;
        const auto h = build_hamiltonian(p);
        const oracle::DenseEvolution dense(h);
        const auto psi = random_state(12, rng).to_vector();
        for (double t : {0.05, 1.0, 3.7, 25.0, -4.2}) {
            const Eigen::VectorXcd a = advance(psi, h, t);
            const Eigen::VectorXcd b = dense.apply(psi, t);
            CHECK((a - b).norm() < 1e-11);
        }
    }
}

TEST_CASE("canonical decay follows the golden rule") {
    const auto p = resonant(260);
    const auto traj = evolve(canonical_state(p), build_hamiltonian(p), {100.0, 0.1, 1e-10, {}, false});
    CHECK(traj.size() == 1001);
    CHECK(traj.times.back() == doctest::Approx(100.0));
    const double d25 = traj.distances[250];
    CHECK(std::abs(d25 - std::exp(-1.0)) < 0.05 * std::exp(-1.0));
}

TEST_CASE("norm and energy conservation for the reference states") {
    const auto p = resonant(208);
    const auto h = build_hamiltonian(p);
    const std::vector<ExcitationState> states{canonical_state(p), time_reversed_state(h, 20.0),
                                              dark_state(p, 20)};
    for (const auto& s : states) {
        const auto traj = evolve(s, h, {100.0, 0.1, 1e-10, {}, false});
        CHECK(traj.max_norm_drift <= 1e-9);
        CHECK(traj.max_energy_drift <= 1e-8);
        for (double d : traj.distances) {
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
        }
    }
}

TEST_CASE("evolution is linear at the amplitude level") {
    std::mt19937_64 rng(11);
    const auto p = resonant(10, 0.4);
    const auto h = build_hamiltonian(p);
    EvolveOptions o{3.0, 0.5, 1e-12, {3.0}, true};
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_state(10, rng);
        const auto b = random_state(10, rng);
        const cplx alpha{0.3, -0.8};
        const cplx beta{-1.1, 0.25};
        const Eigen::VectorXcd mix = alpha * a.to_vector() + beta * b.to_vector();
        const double n = mix.norm();
        const auto mixed = ExcitationState::from_vector(mix / n);

        const Eigen::VectorXcd ea = evolve(a, h, o).snapshots.at(0).state.to_vector();
        const Eigen::VectorXcd eb = evolve(b, h, o).snapshots.at(0).state.to_vector();
        const Eigen::VectorXcd em = evolve(mixed, h, o).snapshots.at(0).state.to_vector();
        CHECK((em * n - (alpha * ea + beta * eb)).norm() < 1e-11);
    }
}

TEST_CASE("snapshots only at requested grid times") {
    const auto p = resonant(30);
    const auto h = build_hamiltonian(p);
    EvolveOptions o{10.0, 0.1, 1e-10, {0.0, 2.5, 10.0}, false};
    const auto traj = evolve(canonical_state(p), h, o);
    REQUIRE(traj.snapshots.size() == 3);
    CHECK(traj.snapshots[1].time == doctest::Approx(2.5));
    CHECK(std::norm(traj.snapshots[1].state.atom_amp()) == doctest::Approx(traj.distances[25]));
    o.snapshot_times = {0.05};
    CHECK_THROWS_AS(evolve(canonical_state(p), h, o), ConfigError);
}

TEST_CASE("batch evolution is bit-identical to sequential evolution") {
    const auto p = resonant(60);
    const auto h = build_hamiltonian(p);
    const std::vector<ExcitationState> states{canonical_state(p), time_reversed_state(h, 10.0),
                                              dark_state(p, 10)};
    const EvolveOptions o{25.0, 0.1, 1e-10, {}, false};
    const auto batch = evolve_batch(states, h, o);
    REQUIRE(batch.size() == 3);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto serial = evolve(states[i], h, o);
        CHECK(serial.distances == batch[i].distances);
        CHECK(serial.atom_amplitudes == batch[i].atom_amplitudes);
    }
}

TEST_CASE("evolve rejects malformed inputs") {
    const auto p = resonant(30);
    const auto h = build_hamiltonian(p);
    CHECK_THROWS_AS(evolve(canonical_state(resonant(31)), h, {1.0, 0.1, 1e-10, {}, false}), ConfigError);
    CHECK_THROWS_AS(evolve(canonical_state(p), h, {0.0, 0.1, 1e-10, {}, false}), ConfigError);
    CHECK_THROWS_AS(evolve(canonical_state(p), h, {1.0, -0.1, 1e-10, {}, false}), ConfigError);
    const auto loose = ExcitationState::unchecked(1.0, std::vector<cplx>(61, cplx{0.01}));
    CHECK_THROWS_AS(evolve(loose, h, {1.0, 0.1, 1e-10, {}, false}), ConfigError);
}

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mpemba/errors.hpp"
#include "mpemba/observables.hpp"
#include "mpemba/propagate.hpp"
#include "mpemba/states.hpp"

using namespace mpemba;

namespace {

ModelParams resonant(int M, double g0 = 0.2, double J = 1.0) {
    ModelParams p;
    p.J = J;
    p.g0 = g0;
    p.M = M;
    return p;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("canonical_state") {
    const auto s = canonical_state(resonant(2));
    CHECK(s.atom_amp() == cplx{1.0});
    CHECK(s.field_amps().size() == 5);
    for (const cplx& q : s.field_amps()) CHECK(q == cplx{});
    CHECK(trace_distance(s) == 1.0);
}

TEST_CASE("conjugate_state") {
    std::vector<cplx> f(3);
    const auto s = ExcitationState::make({0.0, 1.0}, f);
    CHECK(conjugate_state(s).atom_amp() == cplx{0.0, -1.0});

    const auto real = dark_state(resonant(10), 1);
    CHECK(conjugate_state(real) == real);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> g(9);
        for (auto& q : g) q = {n(rng), n(rng)};
        const auto r = custom_state({n(rng), n(rng)}, g).state;
        CHECK(conjugate_state(conjugate_state(r)) == r);
        CHECK(trace_distance(conjugate_state(r)) == trace_distance(r));
        CHECK(conjugate_state(r).norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("time_reversed_state") {
    const auto p = resonant(60);
    const auto h = build_hamiltonian(p);
    CHECK(time_reversed_state(h, 0.0) == canonical_state(p));

    const auto s = time_reversed_state(h, 20.0);
    // Markov estimate |A(t_f)|^2 = exp(-Gamma t_f) = exp(-0.8)
    CHECK(std::abs(trace_distance(s) - std::exp(-0.8)) < 0.02 * std::exp(-0.8));

    // Evolving for t_f returns to the canonical state.
    const auto back = advance(s, h, 20.0);
    CHECK(std::norm(back.atom_amp()) >= 1.0 - 1e-6);
    CHECK(max_diff(back.field_amps(), canonical_state(p).field_amps()) < 1e-9);
    CHECK(std::abs(back.atom_amp() - 1.0) < 1e-9);
}

TEST_CASE("time_reversed_state: reversal segment identity") {
    const auto p = resonant(60);
    const auto h = build_hamiltonian(p);
    const double t_f = 20.0;
    const EvolveOptions o{t_f, 0.1, 1e-10, {}, false};
    const auto canonical = evolve(canonical_state(p), h, o);
    const auto reversed = evolve(time_reversed_state(h, t_f), h, o);
    const std::size_t n = canonical.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(reversed.atom_amplitudes[i] -
                                         std::conj(canonical.atom_amplitudes[n - 1 - i])));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("time_reversed_state errors") {
    CHECK_THROWS_AS(time_reversed_state(resonant(20), 20.0), GuardError);
    const auto p = resonant(60);
    SparseMatrixC m = build_hamiltonian(p).matrix();
    m.coeffRef(0, site_index(p, 0)) = cplx{0.2, 1e-3};
    CHECK_THROWS_AS(time_reversed_state(Hamiltonian(p, m), 5.0), ConfigError);
}

TEST_CASE("dark_state amplitudes") {
    const auto p = resonant(60);
    const auto s = dark_state(p, 20);
    const double ca2 = 1.0 / 1026.0;
    CHECK(std::norm(s.atom_amp()) == doctest::Approx(ca2).epsilon(1e-14));
    CHECK(s.atom_amp().real() > 0.0);
    CHECK(s.atom_amp().imag() == 0.0);
    const double ca = s.atom_amp().real();
    CHECK(s.field(0).real() == doctest::Approx(-5.0 * ca).epsilon(1e-14));
    for (int l = -p.M; l <= p.M; ++l) {
        const bool populated = l % 2 == 0 && std::abs(l) <= 40;
        if (!populated) {
            CHECK(s.field(l) == cplx{});
        } else if (l + 2 <= 40) {
            CHECK(s.field(l + 2) == -s.field(l));
        }
    }
    CHECK(s.field(40) == s.field(0));  // (-1)^20
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dark_state smallest instance") {
    const auto s = dark_state(resonant(8, 1.0), 0);
    CHECK(s.atom_amp().real() == doctest::Approx(std::sqrt(0.5)));
    CHECK(s.field(0).real() == doctest::Approx(-std::sqrt(0.5)));
    int nonzero = 0;
    for (const cplx& q : s.field_amps()) nonzero += q != cplx{};
    CHECK(nonzero == 1);
}

TEST_CASE("dark_state residual against the sparse Hamiltonian") {
    for (int L : {0, 3, 20, 40}) {
        const auto p = resonant(100);
        const auto h = build_hamiltonian(p);
        const auto s = dark_state(p, L);
        const double residual = (h.matrix() * s.to_vector()).norm();
        const double ca = s.atom_amp().real();
        const double J = p.J, g = p.g0;
        const double predicted = ca * std::sqrt(J * J + g * g + 2.0 * J * J * J * J / (g * g));
        CHECK(std::abs(residual - predicted) < 1e-12);
    }
    const auto p = resonant(60);
    const double r20 = (build_hamiltonian(p).matrix() * dark_state(p, 20).to_vector()).norm();
    CHECK(r20 == doctest::Approx(0.2230394330470).epsilon(1e-10));
}

TEST_CASE("dark_state errors") {
    CHECK_THROWS_AS(dark_state(resonant(47), 20), ConfigError);
    CHECK_NOTHROW(dark_state(resonant(48), 20));
    CHECK_THROWS_AS(dark_state(resonant(60, 0.0), 2), ConfigError);
    CHECK_THROWS_AS(dark_state(resonant(60), -1), ConfigError);
}

TEST_CASE("custom_state") {
    std::vector<cplx> zeros(11);
    auto c = custom_state(1.0, zeros);
    CHECK(c.state == canonical_state(resonant(5)));
    CHECK(c.normalization == 1.0);

    std::vector<cplx> photon(11);
    photon[5 + 5] = 1.0;
    c = custom_state(0.0, photon);
    CHECK(trace_distance(c.state) == 0.0);
    CHECK(c.state.field(5) == cplx{1.0});

    std::vector<cplx> both(11);
    both[5] = 1.0;
    c = custom_state(1.0, both);
    CHECK(c.state.atom_amp().real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(c.state.field(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(c.normalization == doctest::Approx(1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(custom_state(0.0, zeros), ConfigError);
}

TEST_CASE("wannier_to_bloch point sources") {
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    std::vector<cplx> f(9);
    f[4] = 1.0;
    auto b = wannier_to_bloch(std::span<const cplx>(f), 18);
    CHECK(b.k_grid.front() == doctest::Approx(-std::numbers::pi));
    for (const cplx& a : b.amps) CHECK(std::abs(a - inv) < 1e-15);

    std::fill(f.begin(), f.end(), cplx{});
    f[5] = 1.0;  // l = 1
    b = wannier_to_bloch(std::span<const cplx>(f), 40);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(std::abs(b.amps[i] - inv * std::polar(1.0, b.k_grid[i])) < 1e-15);
    }
    CHECK_THROWS_AS(wannier_to_bloch(std::span<const cplx>(f), 17), ConfigError);
}

TEST_CASE("wannier/bloch round trip and Plancherel") {
    const auto p = resonant(12);
    const auto dark = dark_state(p, 2);
    const auto b = wannier_to_bloch(dark, 2 * 25);
    const auto back = bloch_to_wannier(b, p.M);
    CHECK(max_diff(back, dark.field_amps()) < 1e-10);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int nk : {50, 64, 101}) {
        std::vector<cplx> f(25);
        for (auto& q : f) q = {n(rng), n(rng)};
        const auto bf = wannier_to_bloch(std::span<const cplx>(f), nk);
        double lhs = 0.0, rhs = 0.0;
        for (const cplx& q : f) lhs += std::norm(q);
        for (const cplx& a : bf.amps) rhs += std::norm(a);
        rhs *= bf.weight();
        CHECK(std::abs(lhs - rhs) < 1e-10 * lhs);
        CHECK(max_diff(bloch_to_wannier(bf, 12), f) < 1e-10);
    }
}

#include "mpemba/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "mpemba/errors.hpp"
#include "mpemba/states.hpp"

namespace mpemba {

namespace {

constexpr double pi = std::numbers::pi;

// out[i] = sum_j w_j exp(-i Omega_j t_i); grid points split across worker threads.
std::vector<cplx> zone_sum(const std::vector<double>& omega, const std::vector<cplx>& w,
                           const UniformGrid& grid) {
    std::vector<cplx> out(static_cast<std::size_t>(grid.count));
    auto work = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double t = grid.at(i);
            cplx acc{};
            for (std::size_t j = 0; j < omega.size(); ++j) {
                if (w[j] != cplx{}) acc += w[j] * std::polar(1.0, -omega[j] * t);
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
    };
    const int threads =
        std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 8);
    if (threads == 1 || grid.count < 256) {
        work(0, grid.count);
        return out;
    }
    std::vector<std::future<void>> jobs;
    const int chunk = (grid.count + threads - 1) / threads;
    for (int b = 0; b < grid.count; b += chunk) {
        jobs.push_back(std::async(std::launch::async, work, b, std::min(grid.count, b + chunk)));
    }
    for (auto& j : jobs) j.get();
    return out;
}

std::vector<double> band(const ModelParams& params, int n_k) {
    std::vector<double> omega(static_cast<std::size_t>(n_k));
    const double dk = 2.0 * pi / n_k;
    for (int j = 0; j < n_k; ++j) omega[static_cast<std::size_t>(j)] = dispersion(params, -pi + dk * j);
    return omega;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Doubles N_k from n_start until the sum stops changing; returns (values, N_k).
template <typename Weights>
std::pair<std::vector<cplx>, int> refine(const ModelParams& params, const UniformGrid& grid,
                                         int n_start, const QuadratureOptions& opt,
                                         Weights&& weights, const char* what) {
    int n = n_start;
    std::vector<cplx> coarse = zone_sum(band(params, n), weights(n), grid);
    while (2 * n <= opt.max_n_k) {
        std::vector<cplx> fine = zone_sum(band(params, 2 * n), weights(2 * n), grid);
        const double change = max_abs_diff(coarse, fine);
        if (change < opt.convergence_tol) return {std::move(fine), 2 * n};
        coarse = std::move(fine);
        n *= 2;
    }
    std::ostringstream os;
    os << what << " quadrature did not converge to " << opt.convergence_tol
       << " within N_k=" << opt.max_n_k;
    throw ToleranceError(os.str());
}

void check_grid(const UniformGrid& g, const char* what) {
    if (!(g.step > 0.0) || g.count < 1) {
        std::ostringstream os;
        os << what << " grid needs step > 0 and at least one point";
        throw ConfigError(os.str());
    }
}

// Samples data (on its own grid) at solver times i * step.
std::vector<cplx> resample(const std::vector<cplx>& values, const UniformGrid& src,
                           const UniformGrid& dst, const char* what) {
    if (src.step > dst.step * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << what << " grid step " << src.step << " is coarser than solver step " << dst.step;
        throw ConfigError(os.str());
    }
    if (src.last() < dst.last() * (1.0 - 1e-12) - 1e-12) {
        std::ostringstream os;
        os << what << " covers [0, " << src.last() << "] but solver needs [0, " << dst.last()
           << "]";
        throw ConfigError(os.str());
    }
    std::vector<cplx> out(static_cast<std::size_t>(dst.count));
    for (int i = 0; i < dst.count; ++i) {
        const double x = dst.at(i) / src.step;
        const double r = std::round(x);
        if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) {
            const auto idx = std::min(static_cast<std::size_t>(r), values.size() - 1);
            out[static_cast<std::size_t>(i)] = values[idx];
            continue;
        }
        const auto lo = std::min(static_cast<std::size_t>(std::floor(x)), values.size() - 2);
        const double frac = x - static_cast<double>(lo);
        out[static_cast<std::size_t>(i)] = (1.0 - frac) * values[lo] + frac * values[lo + 1];
    }
    return out;
}

// Core product-trapezoid recurrence on a uniform grid with sampled G and F.
std::vector<cplx> product_trapezoid(cplx c0, const std::vector<cplx>& G,
                                    const std::vector<cplx>& F, double h) {
    const std::size_t n_pts = F.size();
    std::vector<cplx> c(n_pts);
    std::vector<cplx> f(n_pts);
    c[0] = c0;
    f[0] = F[0];  // memory integral over [0, 0] vanishes
    const cplx implicit = 1.0 + 0.25 * h * h * G[0];
    for (std::size_t n = 0; n + 1 < n_pts; ++n) {
        // History part of the memory integral at t_{n+1}, excluding the c_{n+1} endpoint.
        cplx history = 0.5 * G[n + 1] * c[0];
        for (std::size_t j = 1; j <= n; ++j) history += G[n + 1 - j] * c[j];
        history *= h;
        c[n + 1] = (c[n] + 0.5 * h * (f[n] + F[n + 1] - history)) / implicit;
        f[n + 1] = F[n + 1] - history - 0.5 * h * G[0] * c[n + 1];
    }
    return c;
}

template <typename T>
std::vector<T> every_other(const std::vector<T>& v) {
    std::vector<T> out;
    out.reserve(v.size() / 2 + 1);
    for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
    return out;
}

} // namespace

UniformGrid UniformGrid::spanning(double t_max, double step) {
    if (!(step > 0.0) || t_max < 0.0) throw ConfigError("grid needs step > 0 and t_max >= 0");
    return {step, static_cast<int>(std::floor(t_max / step + 1e-9)) + 1};
}

KernelData memory_kernel(const ModelParams& params, double tau_max, double step, int n_k,
                         const QuadratureOptions& options) {
    params.validate();
    KernelData out;
    out.tau_grid = UniformGrid::spanning(tau_max, step);
    const double g2 = params.g0 * params.g0;
    auto weights = [g2](int n) {
        return std::vector<cplx>(static_cast<std::size_t>(n), cplx{g2 / n, 0.0});
    };
    std::tie(out.values, out.n_k) =
        refine(params, out.tau_grid, std::max(n_k, 8), options, weights, "memory kernel");

    const double g_at_zero = std::abs(out.values.front());
    if (g_at_zero > 0.0) {
        for (int i = 0; i < out.tau_grid.count; ++i) {
            if (std::abs(out.values[static_cast<std::size_t>(i)]) < 0.01 * g_at_zero) {
                out.memory_time = out.tau_grid.at(i);
                break;
            }
        }
    }
    return out;
}

ForcingData forcing_term(const ModelParams& params, const ExcitationState& initial,
                         const UniformGrid& t_grid, int n_k, const QuadratureOptions& options) {
    params.validate();
    check_grid(t_grid, "forcing");
    if (initial.M() != params.M) throw ConfigError("state lattice size does not match params");
    ForcingData out;
    out.t_grid = t_grid;

    int n_start = 2 * params.sites();
    if (n_k > n_start) n_start = n_k;

    const cplx prefactor = cplx{0.0, -1.0} * coupling_spectrum(params);
    auto weights = [&](int n) {
        const BlochField phi = wannier_to_bloch(initial, n);
        std::vector<cplx> w(phi.amps.size());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = prefactor * phi.weight() * phi.amps[j];
        return w;
    };
    std::tie(out.values, out.n_k) = refine(params, t_grid, n_start, options, weights, "forcing");
    return out;
}

VolterraSolution solve_volterra(cplx c_a0, const KernelData& kernel, const ForcingData& forcing,
                                const UniformGrid& t_grid, const VolterraOptions& options) {
    check_grid(t_grid, "solver");
    const auto G = resample(kernel.values, kernel.tau_grid, t_grid, "kernel");
    const auto F = resample(forcing.values, forcing.t_grid, t_grid, "forcing");

    VolterraSolution sol;
    sol.times.resize(static_cast<std::size_t>(t_grid.count));
    for (int i = 0; i < t_grid.count; ++i) sol.times[static_cast<std::size_t>(i)] = t_grid.at(i);
    sol.amplitudes = product_trapezoid(c_a0, G, F, t_grid.step);

    if (t_grid.count >= 3) {
        const auto coarse =
            product_trapezoid(c_a0, every_other(G), every_other(F), 2.0 * t_grid.step);
        double diff = 0.0;
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            diff = std::max(diff, std::abs(coarse[i] - sol.amplitudes[2 * i]));
        }
        sol.error_estimate = diff / 3.0;
    }
    if (options.tol && sol.error_estimate > *options.tol) {
        std::ostringstream os;
        os << "Volterra step " << t_grid.step << " too coarse: error estimate "
           << sol.error_estimate << " exceeds " << *options.tol;
        throw ToleranceError(os.str());
    }
    return sol;
}

VolterraSolution solve_volterra(cplx c_a0, const MarkovData& markov, const ForcingData& forcing,
                                const UniformGrid& t_grid) {
    check_grid(t_grid, "solver");
    const auto F = resample(forcing.values, forcing.t_grid, t_grid, "forcing");
    const cplx rate{0.5 * markov.gamma, markov.delta};
    const double h = t_grid.step;

    VolterraSolution sol;
    sol.times.resize(static_cast<std::size_t>(t_grid.count));
    sol.amplitudes.resize(static_cast<std::size_t>(t_grid.count));
    sol.amplitudes[0] = c_a0;
    sol.times[0] = 0.0;
    for (int n = 0; n + 1 < t_grid.count; ++n) {
        const auto i = static_cast<std::size_t>(n);
        sol.times[i + 1] = t_grid.at(n + 1);
        sol.amplitudes[i + 1] =
            ((1.0 - 0.5 * h * rate) * sol.amplitudes[i] + 0.5 * h * (F[i] + F[i + 1])) /
            (1.0 + 0.5 * h * rate);
    }
    return sol;
}

MarkovData markov_rate_and_shift(const ModelParams& params, double pv_window) {
    params.validate();
    if (!(pv_window > 0.0)) throw ConfigError("principal-value window must be > 0");
    const double delta_c = params.detuning();
    if (!(std::abs(delta_c) < 2.0 * params.J)) {
        std::ostringstream os;
        os << "resonance outside band: |omega0 - omega_c| = " << std::abs(delta_c)
           << " >= 2J = " << 2.0 * params.J;
        throw ResonanceOutsideBandError(os.str());
    }

    MarkovData out;
    // Omega(k) increases monotonically on [0, pi]; bracket its root.
    auto omega = [&](double k) { return dispersion(params, k); };
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(omega, 0.0, pi, tol, iterations);
    out.k0 = 0.5 * (a + b);
    out.v_g = 2.0 * params.J * std::abs(std::sin(out.k0));

    const double g = coupling_spectrum(params);
    // Two roots +-k0, each contributing 2 pi |g|^2 / v_g.
    out.gamma = 2.0 * (2.0 * pi * g * g / out.v_g);

    if (g == 0.0) return out;

    // Integrand even in k: fold onto [0, pi]. With k = k0 -+ e^s each side is a
    // smooth, bounded integral in s, so the pole never drives adaptive refinement.
    auto integrand = [&](double k) { return g * g / (-dispersion(params, k)); };
    using boost::math::quadrature::gauss_kronrod;
    auto side = [&](double eps, double span, double sign) {
        if (!(span > eps)) return 0.0;
        auto f = [&](double s) {
            const double u = std::exp(s);
            return integrand(out.k0 + sign * u) * u;
        };
        return gauss_kronrod<double, 61>::integrate(f, std::log(eps), std::log(span), 12, 1e-13);
    };
    auto excised = [&](double eps) {
        return 2.0 * (side(eps, out.k0, -1.0) + side(eps, pi - out.k0, 1.0));
    };
    const double eps = std::min(pv_window, 0.25 * std::min(out.k0, pi - out.k0));
    out.delta = 2.0 * excised(0.5 * eps) - excised(eps);
    return out;
}

cplx markov_decay(const MarkovData& markov, double t) {
    if (t < 0.0) throw ConfigError("markov_decay requires t >= 0");
    return std::exp(-cplx{0.5 * markov.gamma, markov.delta} * t);
}

} // namespace mpemba

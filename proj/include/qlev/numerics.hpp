#pragma once

// Thin adapters over Boost.Odeint, Boost.Math quadrature and root finding.
// Everything here is an implementation aid shared by the physics modules.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "qlev/error.hpp"

namespace qlev::numerics {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
using State = std::array<double, N>;

/// Integrates dx/dt = f(x, t) from t0 to t1 (either direction) with an
/// embedded Runge-Kutta-Fehlberg 7(8) pair. Returns the accepted step count.
template <std::size_t N, class System>
std::size_t integrate(System&& system, State<N>& x, double t0, double t1,
                      double dt0, const OdeOptions& opt) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_fehlberg78<State<N>>;
    auto stepper = odeint::make_controlled<Stepper>(opt.atol, opt.rtol);
    std::size_t count = 0;
    auto observer = [&](const State<N>&, double) {
        if (++count > opt.max_steps) {
            fail(ErrorCode::StiffIntegration,
                 "ODE step budget exhausted between t=" + std::to_string(t0) +
                     " and t=" + std::to_string(t1));
        }
    };
    double dt = std::copysign(std::abs(dt0), t1 - t0);
    odeint::integrate_adaptive(stepper, std::forward<System>(system), x, t0, t1,
                               dt, observer);
    for (double v : x) {
        if (!std::isfinite(v)) {
            fail(ErrorCode::StiffIntegration, "ODE state became non-finite");
        }
    }
    return count;
}

/// Adaptive Gauss-Kronrod quadrature on a finite interval.
template <class F>
double quad(F&& f, double a, double b, double tol = 1e-10) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        std::forward<F>(f), a, b, 10, tol);
}

/// Bracketed root via TOMS 748. Throws BracketFailure when f(a), f(b) share sign.
template <class F>
double find_root(F&& f, double a, double b, double fa, double fb,
                 int bits = 50, std::uintmax_t max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) {
        fail(ErrorCode::BracketFailure, "root not bracketed in [" +
                                            std::to_string(a) + ", " +
                                            std::to_string(b) + "]");
    }
    boost::math::tools::eps_tolerance<double> tol(bits);
    std::uintmax_t iters = max_iter;
    auto r = boost::math::tools::toms748_solve(std::forward<F>(f), a, b, fa, fb,
                                               tol, iters);
    return 0.5 * (r.first + r.second);
}

template <class F>
double find_root(F&& f, double a, double b, int bits = 50) {
    double fa = f(a);
    double fb = f(b);
    return find_root(f, a, b, fa, fb, bits);
}

}  // namespace qlev::numerics

#include "qlev/scatter.hpp"

#include <cmath>
#include <string>

#include "qlev/error.hpp"
#include "qlev/liouville.hpp"
#include "qlev/numerics.hpp"

namespace qlev {

namespace {

using numerics::State;

numerics::OdeOptions ode_options(const SolverOptions& o) {
    numerics::OdeOptions opt;
    opt.rtol = o.rtol;
    opt.atol = o.rtol * 1e-4;
    return opt;
}

State<4> pack(WavePoint w) {
    return {w.psi.real(), w.psi.imag(), w.dpsi.real(), w.dpsi.imag()};
}

WavePoint unpack(const State<4>& s) {
    return {cplx(s[0], s[1]), cplx(s[2], s[3])};
}

cplx wronskian(WavePoint a, WavePoint b) { return a.psi * b.dpsi - a.dpsi * b.psi; }

// psi'' = -F(t) psi with complex F, from t0 to t1.
template <class Fn>
std::size_t propagate(Fn&& f, WavePoint& w, double t0, double t1, const SolverOptions& o) {
    State<4> s = pack(w);
    auto system = [&](const State<4>& x, State<4>& dx, double t) {
        const cplx fv = f(t);
        const cplx psi(x[0], x[1]);
        const cplx d = -fv * psi;
        dx[0] = x[2];
        dx[1] = x[3];
        dx[2] = d.real();
        dx[3] = d.imag();
    };
    const double scale = std::sqrt(std::abs(f(t0)));
    const double dt0 = std::min(0.01 / std::max(scale, 1e-300), 0.01 * std::abs(t1 - t0));
    const std::size_t steps = numerics::integrate<4>(system, s, t0, t1, dt0, ode_options(o));
    w = unpack(s);
    return steps;
}

// Incoming (surface-directed) WKB wave F^-1/4 exp(-i int sqrt F).
WavePoint wkb_downward(cplx f0, double f1) {
    const cplx psi = 1.0 / std::sqrt(std::sqrt(f0));
    return {psi, psi * (cplx(0.0, -1.0) * std::sqrt(f0) - f1 / (4.0 * f0))};
}

}  // namespace

// ---------------------------------------------------------------------------
// Reflection on the CP tail alone (ell_CP / eps_CP units).

ReflectionSolve solve_reflection(const PhysicalSetup& setup, const PotentialModel& model,
                                 double k, const SolverOptions& options) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        fail(ErrorCode::InvalidArgument, "wavenumber must be positive");
    }
    ReflectionSolve out;
    out.k = k;
    if (model.kind() == PotentialKind::HardWall) {
        out.r = -1.0;
        return out;
    }
    const ScaledPotential v = cp_units(setup, model);
    const double kk = k * v.length_unit();
    const double k2 = kk * kk;
    auto F = [&](double x) { return k2 - v(x, 0); };
    auto Q = [&](double x) {
        const double f0 = F(x), f1 = -v(x, 1), f2 = -v(x, 2);
        return f2 / (4 * f0 * f0) - 5 * f1 * f1 / (16 * f0 * f0 * f0);
    };
    const double x_min = wkb_window_edge(Q, 1.0, options.badlands_threshold);
    double x_max = 1.0;
    for (int i = 0; std::abs(v(x_max)) >= options.tail_threshold * k2; ++i) {
        if (i > 400) fail(ErrorCode::NoWkbWindow, "potential tail never becomes negligible");
        x_max *= 1.25;
    }

    WavePoint w = wkb_downward(F(x_min), -v(x_min, 1));
    const double flux_bottom = std::imag(std::conj(w.psi) * w.dpsi);
    out.steps = propagate([&](double x) { return cplx(F(x)); }, w, x_min, x_max, options);

    // Tail-corrected WKB waves at x_max, with the residual 1/x^4 phase.
    const double q = std::sqrt(F(x_max));
    const double dq = -v(x_max, 1) / (2.0 * q);
    const double c_tail = -v(x_max) * std::pow(x_max, 4);
    const double phase = kk * x_max - c_tail / (6.0 * kk * std::pow(x_max, 3));
    const double amp = std::sqrt(kk / q);
    const cplx up = amp * std::exp(cplx(0.0, phase));
    const cplx down = amp * std::exp(cplx(0.0, -phase));
    const WavePoint U{up, up * cplx(-dq / (2 * q), q)};
    const WavePoint D{down, down * cplx(-dq / (2 * q), -q)};
    const cplx wdu = wronskian(D, U);
    const cplx A = wronskian(w, U) / wdu;
    const cplx B = wronskian(D, w) / wdu;

    out.r = B / A;
    out.transmission = -flux_bottom / (kk * std::norm(A));
    out.flux_error = std::abs(std::norm(out.r) + out.transmission - 1.0);
    out.x_min = x_min;
    out.x_max = x_max;
    return out;
}

cplx reflection_amplitude(const PhysicalSetup& setup, const PotentialModel& model, double k,
                          const SolverOptions& options) {
    return solve_reflection(setup, model, k, options).r;
}

ReflectionData scan_reflection(const PhysicalSetup& setup, const PotentialModel& model,
                               double lo_eps_g, double hi_eps_g, int count,
                               const SolverOptions& options) {
    if (!(hi_eps_g > lo_eps_g) || lo_eps_g < 0.0 || count < 1) {
        fail(ErrorCode::InvalidArgument, "empty or negative energy window");
    }
    ReflectionData data;
    data.model = potential_kind_name(model.kind());
    for (int i = 1; i <= count; ++i) {
        const double e = lo_eps_g + (hi_eps_g - lo_eps_g) * i / count;
        const double k = setup.wavenumber(e * setup.eps_g());
        data.samples.push_back({k, reflection_amplitude(setup, model, k, options)});
    }
    return data;
}

// ---------------------------------------------------------------------------
// Round trip between the surface and gravity (ell_g / eps_g units).

namespace {

struct Decomposition {
    cplx a, c;
};

// psi = a Ci-(xi) + c Ci+(xi) in the coordinate xi = z - z_t.
Decomposition decompose(WavePoint psi, cplx xi) {
    const TravelingWaves t = traveling_waves(xi);
    const WavePoint minus{t.minus, t.minus_prime};
    const WavePoint plus{t.plus, t.plus_prime};
    const cplx w = wronskian(minus, plus);
    return {wronskian(psi, plus) / w, wronskian(minus, psi) / w};
}

RoundTrip finish(cplx energy, Decomposition d, double flux_bottom) {
    RoundTrip rt;
    rt.energy = energy;
    rt.a = d.a;
    rt.c = d.c;
    rt.rho = d.c / d.a;
    rt.transmission_loss = 1.0 - std::norm(rt.rho);
    rt.flux_error =
        std::abs(rt.transmission_loss + constants::pi * flux_bottom / std::norm(d.a));
    return rt;
}

struct Window {
    double y_t;
    double y_start;
    double y_wall;
};

Window solver_window(const PhysicalSetup& setup, const PotentialModel& model,
                     const GravityF& f, const SolverOptions& options) {
    Window w{turning_point_scaled(f), 0.0, 0.0};
    if (model.kind() != PotentialKind::HardWall) {
        const double ell_cp = cp_scales(setup, model).ell / setup.ell_g();
        w.y_start = wkb_window_edge([&](double y) { return badlands_scaled(f, y); },
                                    std::min(ell_cp, 0.5 * w.y_t),
                                    options.badlands_threshold);
        w.y_wall = std::max(w.y_start, std::min(0.5 * w.y_t, 200.0 * ell_cp));
    }
    return w;
}

// Langer coordinate of y, positive below the turning point.
double langer_u(const GravityF& f, double y, double y_t) {
    return y >= y_t ? -std::pow(1.5 * action_above(f, y, y_t), 2.0 / 3.0)
                    : std::pow(1.5 * action_below(f, y, y_t), 2.0 / 3.0);
}

}  // namespace

RoundTrip round_trip_factor(const PhysicalSetup& setup, const PotentialModel& model,
                            double energy, const SolverOptions& options) {
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        fail(ErrorCode::InvalidArgument, "round-trip energy must be positive");
    }
    if (options.original_coordinates_only) {
        return round_trip_factor(setup, model, cplx(energy, 0.0), options);
    }
    const GravityF f(gravity_units(setup, model), energy / setup.eps_g());
    const Window win = solver_window(setup, model, f, options);
    const double y_m = win.y_t + options.matching_offset;

    WavePoint psi;
    double flux_bottom = 0.0;
    if (model.kind() == PotentialKind::HardWall) {
        psi = {0.0, 1.0};
    } else {
        // Cross the wall in the Langer coordinate, co-integrating the action
        // S(y) = int_y^{y_t} sqrt(F) that defines it.
        const double s0 = action_below(f, win.y_start, win.y_t);
        const LangerLocal l0 =
            langer_local_from_u(f, win.y_start, std::pow(1.5 * s0, 2.0 / 3.0));
        WavePoint bold = to_langer(l0, wkb_downward(f(win.y_start), f(win.y_start, 1)));
        flux_bottom = std::imag(std::conj(bold.psi) * bold.dpsi);

        State<5> s{bold.psi.real(), bold.psi.imag(), bold.dpsi.real(), bold.dpsi.imag(), s0};
        auto system = [&](const State<5>& x, State<5>& dx, double y) {
            const LangerLocal l =
                langer_local_from_u(f, y, std::pow(1.5 * std::max(x[4], 0.0), 2.0 / 3.0));
            const cplx p(x[0], x[1]);
            const cplx dp(x[2], x[3]);
            const cplx dd = -l.d1 * l.bold_f * p;
            dx[0] = l.d1 * dp.real();
            dx[1] = l.d1 * dp.imag();
            dx[2] = dd.real();
            dx[3] = dd.imag();
            dx[4] = -std::sqrt(std::max(f(y), 0.0));
        };
        if (win.y_wall > win.y_start) {
            const double dt0 = 0.01 / std::sqrt(f(win.y_start));
            numerics::integrate<5>(system, s, win.y_start, win.y_wall, dt0,
                                   ode_options(options));
        }
        const LangerLocal lw =
            langer_local_from_u(f, win.y_wall, std::pow(1.5 * s[4], 2.0 / 3.0));
        psi = from_langer(lw, {cplx(s[0], s[1]), cplx(s[2], s[3])});
    }
    const double y_from = model.kind() == PotentialKind::HardWall ? 0.0 : win.y_wall;
    propagate([&](double y) { return cplx(f(y)); }, psi, y_from, y_m, options);

    const double u_m = langer_u(f, y_m, win.y_t);
    const LangerLocal lm = langer_local_from_u(f, y_m, u_m);
    const WavePoint bold = to_langer(lm, psi);
    return finish(energy, decompose(bold, -u_m), flux_bottom);
}

RoundTrip round_trip_factor(const PhysicalSetup& setup, const PotentialModel& model,
                            cplx energy, const SolverOptions& options) {
    if (!(energy.real() > 0.0) || !std::isfinite(std::abs(energy))) {
        fail(ErrorCode::InvalidArgument, "round-trip energy must have a positive real part");
    }
    const cplx e = energy / setup.eps_g();
    const GravityF f(gravity_units(setup, model), e);
    const GravityF f_real(gravity_units(setup, model), e.real());
    const Window win = solver_window(setup, model, f_real, options);
    const double y_m = win.y_t + options.matching_offset;

    WavePoint psi;
    double flux_bottom = 0.0;
    if (model.kind() == PotentialKind::HardWall) {
        psi = {0.0, 1.0};
    } else {
        psi = wkb_downward(f.complex_value(win.y_start), f(win.y_start, 1));
        flux_bottom = std::imag(std::conj(psi.psi) * psi.dpsi);
    }
    propagate([&](double y) { return f.complex_value(y); }, psi, win.y_start, y_m, options);
    // Langer coordinate of the real part of the energy; Im E enters only as
    // the rigid shift of the Airy argument.
    const double u_m = langer_u(f_real, y_m, win.y_t);
    const LangerLocal lm = langer_local_from_u(f_real, y_m, u_m);
    return finish(energy, decompose(to_langer(lm, psi), cplx(-u_m, -e.imag())), flux_bottom);
}

}  // namespace qlev

#include "qlev/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "qlev/constants.hpp"
#include "qlev/error.hpp"
#include "qlev/numerics.hpp"

namespace qlev {

namespace {

constexpr double kBracketFraction = 0.4;
constexpr double kNewtonStep = 1e-7;  // eps_g
constexpr double kPoleTolerance = 1e-10;
constexpr double kBasinRadius = 0.5;  // eps_g
constexpr int kNewtonIterations = 60;

void check_n_max(int n_max) {
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be at least 1");
}

double spacing(int n) { return airy_zero(n + 1) - airy_zero(n); }

double record_lifetime(std::optional<cplx> e) {
    if (!e || e->imag() >= 0.0) return std::numeric_limits<double>::infinity();
    return -constants::hbar / (2.0 * e->imag());
}

// Root of a phase function inside the standard bracket around `seed`.
double solve_phase(const std::function<double(double)>& phase, double seed, int n) {
    const double half = kBracketFraction * spacing(n);
    const double lo = std::max(seed - half, 0.5 * seed);
    const double hi = seed + half;
    const double flo = phase(lo);
    const double fhi = phase(hi);
    if (!(flo * fhi < 0.0)) {
        fail(ErrorCode::BracketFailure,
             "no sign change of the resonance phase for n = " + std::to_string(n));
    }
    return numerics::find_root(phase, lo, hi, flo, fhi, 52);
}

}  // namespace

const char* resonance_method_name(ResonanceMethod m) {
    switch (m) {
        case ResonanceMethod::Numeric: return "numeric";
        case ResonanceMethod::EffectiveRange: return "effective-range";
        case ResonanceMethod::ScatteringLength: return "scattering-length";
    }
    return "unknown";
}

std::vector<double> ideal_levels(const PhysicalSetup& setup, int n_max) {
    check_n_max(n_max);
    std::vector<double> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(airy_zero(n) * setup.eps_g());
    return out;
}

std::vector<cplx> scattering_length_levels(const PhysicalSetup& setup, cplx a, int n_max) {
    check_n_max(n_max);
    const cplx shift = setup.mass() * setup.gravity() * a;
    std::vector<cplx> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(airy_zero(n) * setup.eps_g() + shift);
    return out;
}

std::vector<ResonanceRecord> scattering_length_records(const PhysicalSetup& setup,
                                                       const EffectiveRangeCoefficients& c,
                                                       int n_max) {
    const auto levels = scattering_length_levels(setup, scattering_length(c).a, n_max);
    std::vector<ResonanceRecord> out;
    for (int n = 1; n <= n_max; ++n) {
        ResonanceRecord r;
        r.n = n;
        r.E_complex = levels[n - 1];
        r.E_real = levels[n - 1].real();
        r.method = ResonanceMethod::ScatteringLength;
        r.lifetime = record_lifetime(r.E_complex);
        out.push_back(r);
    }
    return out;
}

std::vector<ResonanceRecord> resonances_numeric(const PhysicalSetup& setup,
                                                const PotentialModel& model, int n_max,
                                                const SolverOptions& options) {
    check_n_max(n_max);
    const double eps = setup.eps_g();
    auto phase = [&](double e) {
        return std::arg(round_trip_factor(setup, model, e * eps, options).rho);
    };
    std::vector<ResonanceRecord> out;
    for (int n = 1; n <= n_max; ++n) {
        const double e = solve_phase(phase, airy_zero(n), n);
        const RoundTrip rt = round_trip_factor(setup, model, e * eps, options);
        if (std::abs(std::arg(rt.rho)) > 1e-6) {
            fail(ErrorCode::PhaseUnwrapError,
                 "round-trip phase jumps across the bracket for n = " + std::to_string(n));
        }
        ResonanceRecord r;
        r.n = n;
        r.E_real = e * eps;
        r.method = ResonanceMethod::Numeric;
        r.lifetime = record_lifetime(std::nullopt);
        r.survival = std::abs(rt.rho);
        out.push_back(r);
    }
    return out;
}

std::vector<ResonanceRecord> resonances_effective_range(const PhysicalSetup& setup,
                                                        const EffectiveRangeCoefficients& c,
                                                        int n_max) {
    check_n_max(n_max);
    const double ell_hat = c.ell / setup.ell_g();
    const double shift = scattering_length(c).a.real() / setup.ell_g();
    std::vector<ResonanceRecord> out;
    for (int n = 1; n <= n_max; ++n) {
        auto phase = [&](double e) {
            const cplx r = r_of_K(c, std::sqrt(e) * ell_hat);
            return airy_phase(-e) + 0.5 * std::arg(-r) - n * constants::pi;
        };
        const double e = solve_phase(phase, airy_zero(n) + shift, n);
        ResonanceRecord r;
        r.n = n;
        r.E_real = e * setup.eps_g();
        r.method = ResonanceMethod::EffectiveRange;
        r.lifetime = record_lifetime(std::nullopt);
        r.survival = std::abs(r_of_K(c, std::sqrt(e) * ell_hat));
        out.push_back(r);
    }
    return out;
}

cplx response_function(cplx rho) {
    if (rho == 1.0) fail(ErrorCode::InvalidArgument, "response function has a pole at rho = 1");
    return rho / (1.0 - rho);
}

cplx rho_effective_range(const PhysicalSetup& setup, const EffectiveRangeCoefficients& c,
                         cplx e) {
    const cplx K = std::sqrt(e) * (c.ell / setup.ell_g());
    const TravelingWaves w = traveling_waves(-e);
    return r_of_K(c, K) * w.minus / w.plus;
}

cplx find_pole(const std::function<cplx(cplx)>& rho, cplx seed) {
    cplx e = seed;
    for (int it = 0; it < kNewtonIterations; ++it) {
        const cplx g = rho(e) - 1.0;
        if (!std::isfinite(std::abs(g))) break;
        if (std::abs(g) < kPoleTolerance) {
            if (std::abs(e - seed) > kBasinRadius) {
                fail(ErrorCode::WrongBasin, "pole converged far from its seed");
            }
            if (e.imag() > 0.0) fail(ErrorCode::NewtonDivergence, "pole above the real axis");
            return e;
        }
        const cplx d = (rho(e + kNewtonStep) - rho(e - kNewtonStep)) / (2.0 * kNewtonStep);
        if (d == 0.0) break;
        cplx step = g / d;
        // Stay within the basin; a wild step is damped rather than followed.
        if (std::abs(step) > 0.25) step *= 0.25 / std::abs(step);
        e -= step;
        if (e.real() <= 0.0) break;
    }
    fail(ErrorCode::NewtonDivergence, "Newton iteration on rho = 1 did not converge");
}

std::vector<cplx> complex_poles(const PhysicalSetup& setup, const EffectiveRangeCoefficients& c,
                                int n_max) {
    check_n_max(n_max);
    const cplx shift = scattering_length(c).a / setup.ell_g();
    auto rho = [&](cplx e) { return rho_effective_range(setup, c, e); };
    std::vector<cplx> out;
    for (int n = 1; n <= n_max; ++n) {
        out.push_back(find_pole(rho, airy_zero(n) + shift) * setup.eps_g());
    }
    return out;
}

std::vector<cplx> complex_poles(const PhysicalSetup& setup, const PotentialModel& model,
                                int n_max, const SolverOptions& options) {
    const double eps = setup.eps_g();
    const auto real = resonances_numeric(setup, model, n_max, options);
    auto rho = [&](cplx e) { return round_trip_factor(setup, model, e * eps, options).rho; };
    std::vector<cplx> out;
    for (const auto& r : real) {
        // First-order continuation off the real resonance: rho ~ |rho| exp(i phi' (E - E_n)).
        const double e = r.E_real / eps;
        const double h = 1e-5;
        const double dphi =
            (std::arg(rho(e + h)) - std::arg(rho(e - h))) / (2.0 * h);
        const cplx seed(e, dphi > 0.0 ? std::log(r.survival) / dphi : 0.0);
        out.push_back(find_pole(rho, seed) * eps);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Variable projection: (center, log half-width) are iterated, the amplitude
// is the weighted linear least-squares optimum for each trial.
struct LorentzResidual : Eigen::DenseFunctor<double> {
    const std::vector<ResponseSample>& s;
    double origin;
    double scale;
    double peak_value = 1.0;

    LorentzResidual(const std::vector<ResponseSample>& samples, double e0, double w0)
        : Eigen::DenseFunctor<double>(2, static_cast<int>(samples.size())),
          s(samples), origin(e0), scale(w0) {}

    void shape(const Eigen::VectorXd& x, double& c, double& g) const {
        c = origin + x(0) * scale;
        g = scale * std::exp(x(1));
    }

    double amplitude(double c, double g) const {
        double num = 0.0, den = 0.0;
        for (const auto& p : s) {
            const double l = 1.0 / ((p.E - c) * (p.E - c) + g * g);
            num += l * p.abs_f_sq;
            den += l * l;
        }
        return num / den;
    }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        double c, g;
        shape(x, c, g);
        const double a = amplitude(c, g);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double m = a / ((s[i].E - c) * (s[i].E - c) + g * g);
            f(static_cast<Eigen::Index>(i)) = (m - s[i].abs_f_sq) / peak_value;
        }
        return 0;
    }
};

int count_local_maxima(const std::vector<ResponseSample>& s) {
    int count = 0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].abs_f_sq > s[i - 1].abs_f_sq && s[i].abs_f_sq >= s[i + 1].abs_f_sq) ++count;
    }
    return count;
}

// Exact center and half-width of a Lorentzian through three points,
// from the parabola 1/y = ((E - c)^2 + g^2) / A.
bool three_point_lorentzian(const ResponseSample& a, const ResponseSample& b,
                            const ResponseSample& c, double& center, double& half_width) {
    const double x0 = a.E, x1 = b.E, x2 = c.E;
    const double y0 = 1.0 / a.abs_f_sq, y1 = 1.0 / b.abs_f_sq, y2 = 1.0 / c.abs_f_sq;
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double p2 = (d12 - d01) / (x2 - x0);
    if (!(p2 > 0.0)) return false;
    const double p1 = d01 - p2 * (x0 + x1);
    const double p0 = y0 - p1 * x0 - p2 * x0 * x0;
    center = -p1 / (2.0 * p2);
    const double g2 = p0 / p2 - center * center;
    if (!(g2 > 0.0)) return false;
    half_width = std::sqrt(g2);
    return true;
}

}  // namespace

LorentzianPeak lorentzian_fit(const std::vector<ResponseSample>& samples) {
    if (samples.size() < 7) {
        fail(ErrorCode::InvalidArgument, "a Lorentzian fit needs at least 7 samples");
    }
    for (const auto& p : samples) {
        if (!(p.abs_f_sq > 0.0) || !std::isfinite(p.abs_f_sq)) {
            fail(ErrorCode::InvalidArgument, "response samples must be positive and finite");
        }
    }
    const auto top = std::max_element(samples.begin(), samples.end(),
                                      [](const auto& a, const auto& b) {
                                          return a.abs_f_sq < b.abs_f_sq;
                                      });
    const double span = samples.back().E - samples.front().E;
    double c0 = top->E;
    double g0 = span / 6.0;
    if (top != samples.begin() && top + 1 != samples.end()) {
        double c, g;
        if (three_point_lorentzian(*(top - 1), *top, *(top + 1), c, g)) {
            c0 = c;
            g0 = g;
        }
    }
    if (span < 3.0 * g0) {
        fail(ErrorCode::InvalidArgument, "samples span fewer than three half-widths");
    }

    LorentzResidual functor(samples, c0, g0);
    functor.peak_value = top->abs_f_sq;
    Eigen::NumericalDiff<LorentzResidual> diff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LorentzResidual>> lm(diff);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setGtol(1e-15);
    lm.setMaxfev(2000);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    const auto status = lm.minimize(x);

    LorentzianPeak peak;
    functor.shape(x, peak.center, peak.half_width);
    peak.amplitude = functor.amplitude(peak.center, peak.half_width);
    Eigen::VectorXd f(static_cast<Eigen::Index>(samples.size()));
    functor(x, f);
    peak.residual = f.norm() / std::sqrt(static_cast<double>(f.size()));

    const bool finite = std::isfinite(peak.center) && std::isfinite(peak.half_width) &&
                        std::isfinite(peak.amplitude);
    if (!finite || status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
        fail(ErrorCode::FitDiverged, "Lorentzian fit did not converge");
    }
    if (peak.residual > 1e-2) {
        if (count_local_maxima(samples) > 1) {
            fail(ErrorCode::PeakOverlap, "neighbouring resonance contaminates the fit window");
        }
        fail(ErrorCode::FitDiverged, "Lorentzian fit residual too large");
    }
    return peak;
}

std::vector<ResponseSample> response_scan(const std::function<cplx(double)>& rho, double lo,
                                          double hi, int count) {
    if (!(hi > lo) || count < 2) fail(ErrorCode::InvalidArgument, "empty scan window");
    std::vector<ResponseSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double e = lo + (hi - lo) * i / (count - 1);
        out.push_back({e, std::norm(response_function(rho(e)))});
    }
    return out;
}

LorentzianPeak fit_peak_near(const std::function<cplx(double)>& rho, cplx pole, double span,
                             int count) {
    const double g = std::abs(pole.imag());
    if (!(g > 0.0)) fail(ErrorCode::InvalidArgument, "peak needs a finite width");
    std::vector<ResponseSample> s;
    for (int i = 0; i < count; ++i) {
        const double e = pole.real() + span * g * (2.0 * i / (count - 1) - 1.0);
        s.push_back({e, std::norm(response_function(rho(e)))});
    }
    return lorentzian_fit(s);
}

std::vector<LorentzianPeak> fit_peaks(const std::function<cplx(double)>& rho,
                                      const std::vector<ResponseSample>& grid,
                                      int samples_per_peak) {
    std::vector<LorentzianPeak> out;
    if (grid.size() < 3) return out;
    std::vector<double> values;
    for (const auto& p : grid) values.push_back(p.abs_f_sq);
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    const double floor = 10.0 * values[values.size() / 2];
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const auto& p = grid[i];
        if (!(p.abs_f_sq > grid[i - 1].abs_f_sq && p.abs_f_sq >= grid[i + 1].abs_f_sq)) continue;
        if (p.abs_f_sq < floor) continue;
        double c = p.E, g = grid[i + 1].E - p.E;
        three_point_lorentzian(grid[i - 1], p, grid[i + 1], c, g);
        out.push_back(fit_peak_near(rho, cplx(c, -g), 3.0, samples_per_peak));
    }
    return out;
}

double lifetime(const ResonanceRecord& record) { return record_lifetime(record.E_complex); }

double scattering_length_lifetime(const PhysicalSetup& setup, double b) {
    if (!(b > 0.0)) fail(ErrorCode::InvalidArgument, "b must be positive");
    return constants::hbar / (2.0 * setup.mass() * setup.gravity() * b);
}

std::vector<double> transition_frequencies(const std::vector<ResonanceRecord>& records,
                                           const std::vector<std::pair<int, int>>& pairs) {
    auto energy = [&](int n) {
        for (const auto& r : records) {
            if (r.n == n) return r.E_complex ? r.E_complex->real() : r.E_real;
        }
        fail(ErrorCode::InvalidArgument, "no record for level " + std::to_string(n));
    };
    std::vector<double> out;
    for (const auto& [m, n] : pairs) out.push_back((energy(n) - energy(m)) / constants::hbar);
    return out;
}

}  // namespace qlev

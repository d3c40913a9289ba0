#include "qlev/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

// The Boost 1.74 pchip header calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "qlev/error.hpp"
#include "qlev/numerics.hpp"

namespace qlev {

namespace {

std::function<double(double)> monotone_interpolant(std::vector<double> x,
                                                   std::vector<double> y) {
    using boost::math::interpolators::pchip;
    auto p = std::make_shared<pchip<std::vector<double>>>(std::move(x), std::move(y));
    return [p](double t) { return (*p)(t); };
}

// Safeguarded Newton on g(z) = forward(z) - w inside [a, b].
double polish_inverse(const std::function<double(double)>& forward,
                      const std::function<double(double)>& derivative, double w,
                      double guess, double a, double b) {
    double z = std::clamp(guess, a, b);
    for (int it = 0; it < 20; ++it) {
        const double g = forward(z) - w;
        const double d = derivative(z);
        double next = z - g / d;
        if (!std::isfinite(next) || next < a || next > b) break;
        const double step = std::abs(next - z);
        z = next;
        if (step <= 4e-16 * std::max(std::abs(z), 1e-300)) return z;
    }
    auto g = [&](double t) { return forward(t) - w; };
    return numerics::find_root(g, a, b, 52);
}

}  // namespace

// ---------------------------------------------------------------------------
// Generic coordinate maps

double CoordinateMap::inverse(double w) const {
    if (grid_w.empty()) fail(ErrorCode::InvalidArgument, "coordinate map has no grid");
    if (w < grid_w.front() || w > grid_w.back()) {
        fail(ErrorCode::OutsideMappedDomain,
             "value " + std::to_string(w) + " outside the mapped range");
    }
    auto it = std::upper_bound(grid_w.begin(), grid_w.end(), w);
    std::size_t j = std::clamp<std::size_t>(it - grid_w.begin(), 1, grid_w.size() - 1);
    if (grid_w[j - 1] == w) return grid_z[j - 1];
    const double guess = inverse_guess ? inverse_guess(w) : 0.5 * (grid_z[j - 1] + grid_z[j]);
    return polish_inverse(forward, derivative, w, guess, grid_z[j - 1], grid_z[j]);
}

bool CoordinateMap::is_monotone() const {
    for (std::size_t i = 0; i < grid_z.size(); ++i) {
        if (!(derivative(grid_z[i]) > 0.0)) return false;
        if (i > 0 && !(grid_w[i] > grid_w[i - 1])) return false;
    }
    return true;
}

CoordinateMap make_coordinate_map(std::function<double(double)> forward,
                                  std::function<double(double)> derivative, double lo,
                                  double hi, int samples, bool geometric) {
    if (!(hi > lo) || samples < 4) fail(ErrorCode::InvalidArgument, "bad map domain");
    CoordinateMap map;
    map.forward = std::move(forward);
    map.derivative = std::move(derivative);
    map.lo = lo;
    map.hi = hi;
    const bool geo = geometric && lo > 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double z = geo ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        map.grid_z.push_back(i == samples - 1 ? hi : z);
        map.grid_w.push_back(map.forward(map.grid_z.back()));
    }
    map.inverse_guess = monotone_interpolant(map.grid_w, map.grid_z);
    return map;
}

namespace {

struct Stencil {
    double h;
    double fm2, fm1, f0, fp1, fp2;
};

Stencil derivative_stencil(const CoordinateMap& map, double z) {
    double h = 2e-3 * (z != 0.0 ? std::abs(z) : (map.hi - map.lo));
    if (z - 2 * h < map.lo || z + 2 * h > map.hi) {
        fail(ErrorCode::NearBoundary,
             "difference stencil at " + std::to_string(z) + " leaves the map domain");
    }
    return {h, map.derivative(z - 2 * h), map.derivative(z - h), map.derivative(z),
            map.derivative(z + h), map.derivative(z + 2 * h)};
}

double second_of(const CoordinateMap& map, double z) {
    if (map.second) return map.second(z);
    const Stencil s = derivative_stencil(map, z);
    return (s.fm2 - 8 * s.fm1 + 8 * s.fp1 - s.fp2) / (12 * s.h);
}

}  // namespace

double schwarzian(const CoordinateMap& map, double z) {
    double d1, d2, d3;
    if (map.second && map.third) {
        d1 = map.derivative(z);
        d2 = map.second(z);
        d3 = map.third(z);
    } else {
        const Stencil s = derivative_stencil(map, z);
        d1 = s.f0;
        d2 = (s.fm2 - 8 * s.fm1 + 8 * s.fp1 - s.fp2) / (12 * s.h);
        d3 = (-s.fm2 + 16 * s.fm1 - 30 * s.f0 + 16 * s.fp1 - s.fp2) / (12 * s.h * s.h);
    }
    const double r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

std::function<double(double)> transform_f(std::function<double(double)> f,
                                          CoordinateMap map) {
    return [f = std::move(f), map = std::move(map)](double w) {
        const double z = map.inverse(w);
        const double d = map.derivative(z);
        return (f(z) - 0.5 * schwarzian(map, z)) / (d * d);
    };
}

WavePoint rescale_wavefunction(const CoordinateMap& map, double z, WavePoint original) {
    const double d1 = map.derivative(z);
    const double d2 = second_of(map, z);
    const double root = std::sqrt(d1);
    return {root * original.psi,
            original.dpsi / root + original.psi * d2 / (2.0 * d1 * root)};
}

// ---------------------------------------------------------------------------
// F in gravity units, badlands function, turning point

double GravityF::operator()(double y, int order) const {
    switch (order) {
        case 0: return energy_.real() - y - v_(y, 0);
        case 1: return -1.0 - v_(y, 1);
        default: return -v_(y, order);
    }
}

cplx GravityF::complex_value(double y) const { return energy_ - y - v_(y, 0); }

double badlands_scaled(const GravityF& f, double y) {
    const double f0 = f(y, 0);
    const double scale = std::max({1.0, std::abs(f.energy()), std::abs(y)});
    if (std::abs(f0) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        fail(ErrorCode::AtTurningPoint, "badlands function evaluated at F = 0");
    }
    const double f1 = f(y, 1);
    const double f2 = f(y, 2);
    return f2 / (4.0 * f0 * f0) - 5.0 * f1 * f1 / (16.0 * f0 * f0 * f0);
}

double badlands(const PhysicalSetup& setup, const PotentialModel& model, double energy,
                double z) {
    if (!(z > 0.0)) fail(ErrorCode::NonPositiveAltitude, "altitude must be positive");
    const GravityF f(gravity_units(setup, model), energy / setup.eps_g());
    return badlands_scaled(f, z / setup.ell_g());
}

double turning_point_scaled(const GravityF& f) {
    const double e = f.energy();
    double hi = std::max(e, 0.0) + 1.0;
    for (int i = 0; f(hi) >= 0.0; ++i) {
        if (i > 60) fail(ErrorCode::BracketFailure, "no turning point found");
        hi = 2.0 * hi + 1.0;
    }
    double lo = e > 0.0 ? e : 0.5 * hi;
    for (int i = 0; !(f(lo) > 0.0); ++i) {
        if (f(lo) == 0.0) return lo;
        if (i > 200) fail(ErrorCode::BracketFailure, "no classically allowed region");
        lo *= 0.5;
    }
    if (f.potential().model().kind() == PotentialKind::Tabulated) {
        int changes = 0;
        const double a = 1e-6 * hi, b = 3.0 * hi;
        double prev = f(a);
        for (int i = 1; i <= 600; ++i) {
            const double y = a * std::pow(b / a, i / 600.0);
            const double cur = f(y);
            if ((cur > 0.0) != (prev > 0.0)) ++changes;
            prev = cur;
        }
        if (changes > 1) {
            fail(ErrorCode::MultipleTurningPoints,
                 std::to_string(changes) + " sign changes of F in the solver window");
        }
    }
    return numerics::find_root([&](double y) { return f(y); }, lo, hi, 53);
}

LangerProblem make_langer_problem(const PhysicalSetup& setup, const PotentialModel& model,
                                  double energy) {
    const GravityF f(gravity_units(setup, model), energy / setup.eps_g());
    const double y_t = turning_point_scaled(f);
    return {setup, model, energy, y_t * setup.ell_g(), energy / setup.eps_g()};
}

// ---------------------------------------------------------------------------
// Action integrals

double action_below(const GravityF& f, double y, double y_t) {
    if (y >= y_t) return 0.0;
    const double y_c = y_t - 0.5 * std::min(1.0, std::abs(y_t));
    auto near = [&](double lower) {
        // t^2 = y_t - y removes the square-root endpoint behaviour.
        auto g = [&](double t) {
            const double v = f(y_t - t * t);
            return v > 0.0 ? 2.0 * t * std::sqrt(v) : 0.0;
        };
        return numerics::quad(g, 0.0, std::sqrt(y_t - lower));
    };
    if (y >= y_c || !(y_c > 0.0)) return near(y);
    auto root_f = [&](double t) { return std::sqrt(std::max(f(t), 0.0)); };
    double total = near(y_c);
    if (y <= 0.0) return total + numerics::quad(root_f, y, y_c);
    for (double a = y; a < y_c;) {
        const double b = std::min(2.0 * a, y_c);
        total += numerics::quad(root_f, a, b);
        a = b;
    }
    return total;
}

double action_above(const GravityF& f, double y, double y_t) {
    if (y <= y_t) return 0.0;
    auto g = [&](double t) {
        const double v = f(y_t + t * t);
        return v < 0.0 ? 2.0 * t * std::sqrt(-v) : 0.0;
    };
    return numerics::quad(g, 0.0, std::sqrt(y - y_t));
}

// ---------------------------------------------------------------------------
// Langer coordinate

LangerLocal langer_local_from_u(const GravityF& f, double y, double u) {
    const double f0 = f(y, 0);
    const double f1 = f(y, 1);
    const double d1 = std::sqrt(f0 / u);
    const double d2 = (f1 * u + f0 * d1) / (2.0 * d1 * u * u);
    const double q = badlands_scaled(f, y);
    return {u, d1, d2, u - 5.0 / (16.0 * u * u) - u * q};
}

WavePoint to_langer(const LangerLocal& local, WavePoint original) {
    const double root = std::sqrt(local.d1);
    return {root * original.psi,
            original.dpsi / root + original.psi * local.d2 / (2.0 * local.d1 * root)};
}

WavePoint from_langer(const LangerLocal& local, WavePoint langer) {
    const double root = std::sqrt(local.d1);
    return {langer.psi / root,
            root * langer.dpsi - langer.psi * local.d2 / (2.0 * local.d1 * root)};
}

double wkb_window_edge(const std::function<double(double)>& q, double start,
                       double threshold) {
    double y = start;
    for (int i = 0; i < 600; ++i) {
        if (std::abs(q(y)) < threshold) return y;
        y *= 0.8;
    }
    fail(ErrorCode::NoWkbWindow, "badlands function never drops below threshold");
}

LangerMap::LangerMap(const LangerProblem& problem)
    : problem_(problem),
      f_(gravity_units(problem.setup, problem.model),
         problem.energy / problem.setup.eps_g()) {
    const double ell_g = problem.setup.ell_g();
    y_t_ = problem.z_t / ell_g;
    bold_z_t_ = problem.bold_z_t;

    // Local series of F about the turning point: F = a1 s (1 + A s + B s^2 + C s^3)
    // with s = y_t - y.
    const double a1 = -f_(y_t_, 1);
    if (!(a1 > 0.0) || !std::isfinite(a1)) {
        fail(ErrorCode::SingularityExpansionFailure, "F'(z_t) is not negative");
    }
    const double A = f_(y_t_, 2) / 2.0 / a1;
    const double B = -f_(y_t_, 3) / 6.0 / a1;
    const double C = f_(y_t_, 4) / 24.0 / a1;
    const double c1 = A / 2.0;
    const double c2 = B / 2.0 - A * A / 8.0;
    const double c3 = C / 2.0 - A * B / 4.0 + A * A * A / 16.0;
    const double d1 = 0.6 * c1;
    const double d2 = 3.0 / 7.0 * c2;
    const double d3 = c3 / 3.0;
    a1_cbrt_ = std::cbrt(a1);
    q2_ = 2.0 / 3.0 * d1;
    q3_ = 2.0 / 3.0 * d2 - d1 * d1 / 9.0;
    q4_ = 2.0 / 3.0 * d3 - 2.0 / 9.0 * d1 * d2 + 4.0 / 81.0 * d1 * d1 * d1;
    if (!std::isfinite(q2_ + q3_ + q4_)) {
        fail(ErrorCode::SingularityExpansionFailure, "turning-point series is not finite");
    }

    // Grid: geometric towards the surface, uniform near and above y_t.
    double y_lo = 0.0;
    if (problem.model.kind() != PotentialKind::HardWall) {
        const double ell_cp = cp_scales(problem.setup, problem.model).ell / ell_g;
        y_lo = wkb_window_edge([this](double y) { return badlands_scaled(f_, y); },
                               std::min(ell_cp, 0.5 * y_t_));
    }
    const double y_hi = y_t_ + 12.0;
    std::vector<double> nodes;
    for (double y = y_lo; y < y_t_ - 0.02;) {
        nodes.push_back(y);
        y = (y > 0.0) ? std::min(1.04 * y, y + 0.05) : y + 0.05;
    }
    // One refinement pass where the badlands function is large.
    std::vector<double> refined;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        refined.push_back(nodes[i]);
        const double next = (i + 1 < nodes.size()) ? nodes[i + 1] : y_t_;
        const double mid = 0.5 * (nodes[i] + next);
        if (y_t_ - mid > kTurningPointSeriesWidth && mid > 0.0 &&
            std::abs(badlands_scaled(f_, mid)) > 1e-3) {
            refined.push_back(mid);
        }
    }
    grid_y_ = std::move(refined);
    grid_y_.push_back(y_t_);
    for (double y = y_t_ + 0.05; y < y_hi; y += 0.05) grid_y_.push_back(y);
    grid_y_.push_back(y_hi);

    const std::size_t n = grid_y_.size();
    const std::size_t it = std::find(grid_y_.begin(), grid_y_.end(), y_t_) - grid_y_.begin();
    grid_action_.assign(n, 0.0);
    auto root_f = [this](double t) { return std::sqrt(std::max(f_(t), 0.0)); };
    for (std::size_t i = it; i-- > 0;) {
        grid_action_[i] = (i + 1 == it)
                              ? action_below(f_, grid_y_[i], y_t_)
                              : grid_action_[i + 1] +
                                    numerics::quad(root_f, grid_y_[i], grid_y_[i + 1]);
    }
    auto root_mf = [this](double t) { return std::sqrt(std::max(-f_(t), 0.0)); };
    for (std::size_t i = it + 1; i < n; ++i) {
        grid_action_[i] = (i == it + 1)
                              ? action_above(f_, grid_y_[i], y_t_)
                              : grid_action_[i - 1] +
                                    numerics::quad(root_mf, grid_y_[i - 1], grid_y_[i]);
    }
    grid_bold_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid_action_[i];
        const double u = std::pow(1.5 * s, 2.0 / 3.0);
        grid_bold_[i] = bold_z_t_ - (i <= it ? u : -u);
    }
    inverse_guess_ = monotone_interpolant(grid_bold_, grid_y_);
}

double LangerMap::action_scaled(double y) const {
    if (y < grid_y_.front()) return action_below(f_, y, y_t_);
    if (y > grid_y_.back()) return action_above(f_, y, y_t_);
    auto pos = std::lower_bound(grid_y_.begin(), grid_y_.end(), y);
    std::size_t j = pos - grid_y_.begin();
    if (*pos == y) return grid_action_[j];
    if (y < y_t_) {
        // grid_y_[j] > y, integrate up to that node.
        if (grid_y_[j] >= y_t_ - 0.1) return action_below(f_, y, y_t_);
        auto root_f = [this](double t) { return std::sqrt(std::max(f_(t), 0.0)); };
        return grid_action_[j] + numerics::quad(root_f, y, grid_y_[j]);
    }
    if (grid_y_[j - 1] <= y_t_ + 0.1) return action_above(f_, y, y_t_);
    auto root_mf = [this](double t) { return std::sqrt(std::max(-f_(t), 0.0)); };
    return grid_action_[j - 1] + numerics::quad(root_mf, grid_y_[j - 1], y);
}

double LangerMap::series_u(double s, int order) const {
    switch (order) {
        case 0: return a1_cbrt_ * s * (1.0 + s * (q2_ + s * (q3_ + s * q4_)));
        case 1: return a1_cbrt_ * (1.0 + s * (2 * q2_ + s * (3 * q3_ + s * 4 * q4_)));
        case 2: return a1_cbrt_ * (2 * q2_ + s * (6 * q3_ + s * 12 * q4_));
        default: return a1_cbrt_ * (6 * q3_ + s * 24 * q4_);
    }
}

double LangerMap::u_scaled(double y) const {
    const double s = y_t_ - y;
    if (std::abs(s) < kTurningPointSeriesWidth) return series_u(s, 0);
    const double u = std::pow(1.5 * action_scaled(y), 2.0 / 3.0);
    return s > 0.0 ? u : -u;
}

LangerLocal LangerMap::local_scaled(double y) const {
    const double s = y_t_ - y;
    if (std::abs(s) < kTurningPointSeriesWidth) {
        // d/dy = -d/ds.
        const double u = series_u(s, 0);
        const double d1 = series_u(s, 1);
        const double d2 = -series_u(s, 2);
        const double d3 = series_u(s, 3);
        const double r = d2 / d1;
        const double schw = d3 / d1 - 1.5 * r * r;
        return {u, d1, d2, u - 0.5 * schw / (d1 * d1)};
    }
    return langer_local_from_u(f_, y, u_scaled(y));
}

double LangerMap::schwarzian_scaled(double y) const {
    const double s = y_t_ - y;
    if (std::abs(s) < kTurningPointSeriesWidth) {
        const double d1 = series_u(s, 1);
        const double d2 = -series_u(s, 2);
        const double d3 = series_u(s, 3);
        const double r = d2 / d1;
        return d3 / d1 - 1.5 * r * r;
    }
    const LangerLocal l = local_scaled(y);
    return 2.0 * l.d1 * l.d1 * (l.u - l.bold_f);
}

double LangerMap::inverse_scaled(double bold_z) const {
    if (bold_z < grid_bold_.front() || bold_z > grid_bold_.back()) {
        fail(ErrorCode::OutsideMappedDomain,
             "Langer coordinate " + std::to_string(bold_z) + " outside the mapped range");
    }
    auto it = std::upper_bound(grid_bold_.begin(), grid_bold_.end(), bold_z);
    std::size_t j = std::clamp<std::size_t>(it - grid_bold_.begin(), 1, grid_bold_.size() - 1);
    if (grid_bold_[j - 1] == bold_z) return grid_y_[j - 1];
    auto forward = [this](double y) { return bold_z_scaled(y); };
    auto derivative = [this](double y) { return local_scaled(y).d1; };
    return polish_inverse(forward, derivative, bold_z, inverse_guess_(bold_z),
                          grid_y_[j - 1], grid_y_[j]);
}

double LangerMap::bold_z(double z) const {
    return bold_z_scaled(z / problem_.setup.ell_g());
}

double LangerMap::derivative(double z) const {
    const double lg = problem_.setup.ell_g();
    return local_scaled(z / lg).d1 / lg;
}

double LangerMap::second_derivative(double z) const {
    const double lg = problem_.setup.ell_g();
    return local_scaled(z / lg).d2 / (lg * lg);
}

double LangerMap::schwarzian(double z) const {
    const double lg = problem_.setup.ell_g();
    return schwarzian_scaled(z / lg) / (lg * lg);
}

double LangerMap::inverse(double bold_z) const {
    return inverse_scaled(bold_z) * problem_.setup.ell_g();
}

CoordinateMap LangerMap::coordinate_map() const {
    auto self = std::make_shared<LangerMap>(*this);
    const double lg = problem_.setup.ell_g();
    CoordinateMap map;
    map.forward = [self](double z) { return self->bold_z(z); };
    map.derivative = [self](double z) { return self->derivative(z); };
    map.lo = grid_y_.front() * lg;
    map.hi = grid_y_.back() * lg;
    for (std::size_t i = 0; i < grid_y_.size(); ++i) {
        map.grid_z.push_back(grid_y_[i] * lg);
        map.grid_w.push_back(grid_bold_[i]);
    }
    map.inverse_guess = [self](double w) {
        return self->inverse_guess_(w) * self->problem().setup.ell_g();
    };
    return map;
}

CoordinateMap langer_map(const LangerProblem& problem) {
    return LangerMap(problem).coordinate_map();
}

double langer_f(const LangerMap& map, double bold_z) {
    return map.local_scaled(map.inverse_scaled(bold_z)).bold_f;
}

double langer_f(const LangerProblem& problem, double bold_z) {
    return langer_f(LangerMap(problem), bold_z);
}

}  // namespace qlev

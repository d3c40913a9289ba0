#include "qlev/potential.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "qlev/error.hpp"

namespace qlev {

using constants::hbar;

PhysicalSetup::PhysicalSetup(double mass, double gravity)
    : mass_(mass), gravity_(gravity) {
    if (!(mass > 0.0) || !(gravity > 0.0) || !std::isfinite(mass) ||
        !std::isfinite(gravity)) {
        fail(ErrorCode::InvalidArgument, "mass and gravity must be positive");
    }
    ell_g_ = std::cbrt(hbar * hbar / (2.0 * mass * mass * gravity));
    eps_g_ = mass * gravity * ell_g_;
}

double PhysicalSetup::wavenumber(double energy) const {
    return std::sqrt(2.0 * mass_ * energy) / hbar;
}

double PhysicalSetup::energy_of_wavenumber(double k) const {
    return hbar * hbar * k * k / (2.0 * mass_);
}

const char* potential_kind_name(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::HardWall: return "hard-wall";
        case PotentialKind::HomogeneousV4: return "v4";
        case PotentialKind::V3V4: return "v3v4";
        case PotentialKind::Tabulated: return "table";
    }
    return "unknown";
}

namespace {

// d^n/dz^n z^-p = (-1)^n p (p+1) ... (p+n-1) z^-(p+n)
double inverse_power_derivative(double z, int p, int n) {
    double c = 1.0;
    for (int j = 0; j < n; ++j) c *= -(p + j);
    return c * std::pow(z, -(p + n));
}

// Natural cubic spline on strictly increasing abscissae.
class NaturalSpline {
public:
    NaturalSpline() = default;
    NaturalSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
        const std::size_t n = x_.size();
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            const double diag = 2.0 * (h0 + h1);
            const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
            const double sub = (i > 1) ? h0 : 0.0;
            const double denom = diag - sub * c[i - 1];
            c[i] = h1 / denom;
            d[i] = (rhs - sub * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    // Value and first two derivatives at t.
    std::array<double, 3> eval(double t) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = std::clamp<std::size_t>(it - x_.begin(), 1, x_.size() - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h;
        const double b = (t - x_[i]) / h;
        const double v = a * y_[i] + b * y_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
        const double dv = (y_[i + 1] - y_[i]) / h +
                          (-(3 * a * a - 1) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6.0;
        const double ddv = a * m_[i] + b * m_[i + 1];
        return {v, dv, ddv};
    }

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace

struct PotentialModel::Table {
    double z_lo = 0.0;
    double z_hi = 0.0;
    double c3_inner = 0.0;
    double c4_outer = 0.0;
    NaturalSpline spline;

    // V and its first two derivatives inside the table.
    std::array<double, 3> inside(double z) const {
        auto [w, dw, ddw] = spline.eval(std::log(z));
        const double v = -std::exp(w);
        return {v, v * dw / z, v * (dw * dw + ddw - dw) / (z * z)};
    }

    double derivative(double z, int order) const {
        if (z < z_lo) return -c3_inner * inverse_power_derivative(z, 3, order);
        if (z > z_hi) return -c4_outer * inverse_power_derivative(z, 4, order);
        if (order <= 2) return inside(z)[order];
        // Five-point differences of the spline's second derivative.
        const double h = 1e-3 * z;
        auto d2 = [&](double t) {
            if (t < z_lo) return -c3_inner * inverse_power_derivative(t, 3, 2);
            if (t > z_hi) return -c4_outer * inverse_power_derivative(t, 4, 2);
            return inside(t)[2];
        };
        const double fm2 = d2(z - 2 * h), fm1 = d2(z - h), f0 = d2(z);
        const double fp1 = d2(z + h), fp2 = d2(z + 2 * h);
        if (order == 3) return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
    }
};

PotentialModel PotentialModel::hard_wall() { return PotentialModel{}; }

PotentialModel PotentialModel::homogeneous_v4(double c4) {
    if (!(c4 > 0.0) || !std::isfinite(c4)) {
        fail(ErrorCode::InvalidArgument, "C4 must be positive");
    }
    PotentialModel m;
    m.kind_ = PotentialKind::HomogeneousV4;
    m.c4_ = c4;
    return m;
}

PotentialModel PotentialModel::v3v4(double c3, double c4) {
    if (!(c3 > 0.0) || !(c4 > 0.0) || !std::isfinite(c3) || !std::isfinite(c4)) {
        fail(ErrorCode::InvalidArgument, "C3 and C4 must be positive");
    }
    PotentialModel m;
    m.kind_ = PotentialKind::V3V4;
    m.c3_ = c3;
    m.c4_ = c4;
    return m;
}

PotentialModel PotentialModel::tabulated(std::vector<double> z, std::vector<double> v) {
    if (z.size() != v.size()) {
        fail(ErrorCode::TableParseError, "column lengths differ");
    }
    if (z.size() < 100) {
        fail(ErrorCode::TableTooSparse,
             "tabulated potential needs at least 100 rows, got " + std::to_string(z.size()));
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0.0) || (i > 0 && !(z[i] > z[i - 1]))) {
            fail(ErrorCode::TableParseError,
                 "row " + std::to_string(i + 1) + ": z must be positive and strictly increasing");
        }
        if (!(v[i] < 0.0) || !std::isfinite(v[i])) {
            fail(ErrorCode::TableParseError,
                 "row " + std::to_string(i + 1) + ": V must be negative");
        }
    }
    auto table = std::make_shared<Table>();
    const std::size_t n = z.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 10);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < tail; ++i) {
        num += -v[i] * std::pow(z[i], -3);
        den += std::pow(z[i], -6);
    }
    table->c3_inner = num / den;
    num = den = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) {
        num += -v[i] * std::pow(z[i], -4);
        den += std::pow(z[i], -8);
    }
    table->c4_outer = num / den;
    table->z_lo = z.front();
    table->z_hi = z.back();

    std::vector<double> lx(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(z[i]);
        lw[i] = std::log(-v[i]);
    }
    table->spline = NaturalSpline(std::move(lx), std::move(lw));

    PotentialModel m;
    m.kind_ = PotentialKind::Tabulated;
    m.c3_ = table->c3_inner;
    m.c4_ = table->c4_outer;
    m.table_ = std::move(table);
    return m;
}

double PotentialModel::derivative(double z, int order) const {
    if (!(z > 0.0)) {
        fail(ErrorCode::NonPositiveAltitude, "altitude must be positive, got " + std::to_string(z));
    }
    if (order < 0 || order > 4) fail(ErrorCode::InvalidArgument, "derivative order must be 0..4");
    switch (kind_) {
        case PotentialKind::HardWall:
            return 0.0;
        case PotentialKind::HomogeneousV4:
            return -c4_ * inverse_power_derivative(z, 4, order);
        case PotentialKind::V3V4: {
            // Leibniz rule on z^-3 (z + zc)^-1; all terms share one sign.
            const double zc = c4_ / c3_;
            double sum = 0.0;
            double binom = 1.0;
            for (int j = 0; j <= order; ++j) {
                const int k = order - j;
                double gk = std::pow(z + zc, -(1 + k));
                for (int i = 1; i <= k; ++i) gk *= -i;
                sum += binom * inverse_power_derivative(z, 3, j) * gk;
                binom = binom * (order - j) / (j + 1);
            }
            return -c4_ * sum;
        }
        case PotentialKind::Tabulated:
            return table_->derivative(z, order);
    }
    return 0.0;
}

double cp_potential(const PotentialModel& model, double z) { return model.value(z); }

double f_function(const PhysicalSetup& setup, const PotentialModel& model,
                  double energy, double z) {
    const double m = setup.mass();
    return 2.0 * m * (energy - m * setup.gravity() * z - model.value(z)) / (hbar * hbar);
}

CpScales cp_scales(const PhysicalSetup& setup, const PotentialModel& model) {
    if (!(model.c4() > 0.0)) {
        fail(ErrorCode::InvalidArgument, "model has no long-range C4 tail");
    }
    const double ell = std::sqrt(2.0 * setup.mass() * model.c4()) / hbar;
    return {ell, hbar * hbar / (2.0 * setup.mass() * ell * ell)};
}

double c4_from_length(const PhysicalSetup& setup, double ell) {
    return hbar * hbar * ell * ell / (2.0 * setup.mass());
}

double ScaledPotential::operator()(double x, int order) const {
    if (model_.kind() == PotentialKind::HardWall) return 0.0;
    return model_.derivative(x * length_, order) * std::pow(length_, order) / energy_;
}

ScaledPotential gravity_units(const PhysicalSetup& setup, const PotentialModel& model) {
    return ScaledPotential(model, setup.ell_g(), setup.eps_g());
}

ScaledPotential cp_units(const PhysicalSetup& setup, const PotentialModel& model) {
    const CpScales s = cp_scales(setup, model);
    return ScaledPotential(model, s.ell, s.eps);
}

double SurfacePreset::c4(const PhysicalSetup& setup) const {
    if (c4_au) {
        return *c4_au * constants::hartree * std::pow(constants::bohr_radius, 4);
    }
    return c4_from_length(setup, ell());
}

double SurfacePreset::c3() const {
    return c3_au ? *c3_au * constants::hartree * std::pow(constants::bohr_radius, 3) : 0.0;
}

const std::vector<SurfacePreset>& builtin_presets() {
    static const std::vector<SurfacePreset> presets = {
        {"perfect-mirror", 520.06, {1.0468, -0.1028}, {0.17, -2.06}, std::nullopt, std::nullopt},
        {"silicon", 429.82, {1.0149, -0.2271}, {0.09, -2.09}, std::nullopt, std::nullopt},
        {"silica", 321.31, {0.8504, -0.2414}, {0.70, -4.8}, std::nullopt, std::nullopt},
    };
    return presets;
}

const SurfacePreset& find_preset(const std::string& name) {
    std::string key;
    for (char c : name) {
        if (c == '_' || c == ' ') c = '-';
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "mirror" || key == "perfect") key = "perfect-mirror";
    for (const auto& p : builtin_presets()) {
        if (p.name == key) return p;
    }
    fail(ErrorCode::ConfigError, "unknown surface preset '" + name + "'");
}

}  // namespace qlev

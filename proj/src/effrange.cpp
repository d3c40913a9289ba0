#include "qlev/effrange.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "qlev/constants.hpp"
#include "qlev/error.hpp"

namespace qlev {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr double kMinSamples = 50;
constexpr double kMaxCondition = 1e10;
}  // namespace

EffectiveRangeCoefficients v4_coefficients(double ell) {
    EffectiveRangeCoefficients c;
    c.ell = ell;
    c.alpha0 = 1.0;
    c.alpha2 = cplx(8.0 / 3.0 * (constants::euler_gamma + std::log(2.0)) - 28.0 / 9.0,
                    -2.0 * constants::pi / 3.0);
    c.source = "v4-exact";
    return c;
}

EffectiveRangeCoefficients preset_coefficients(const SurfacePreset& preset) {
    EffectiveRangeCoefficients c;
    c.ell = preset.ell();
    c.alpha0 = preset.alpha0;
    c.alpha2 = preset.alpha2;
    c.window_lo = 0.0;
    c.window_hi = 500.0;
    c.source = preset.name;
    return c;
}

cplx alpha(const EffectiveRangeCoefficients& c, cplx K) {
    if (K == 0.0) return c.alpha0;
    return c.alpha0 + kI * (constants::pi / 3.0) * K +
           (c.alpha2 + 4.0 / 3.0 * c.alpha0 * std::log(K)) * K * K;
}

cplx r_of_K(const EffectiveRangeCoefficients& c, cplx K) {
    const cplx w = K * alpha(c, K);
    return -(1.0 - w) / (1.0 + w);
}

cplx r_model(const EffectiveRangeCoefficients& c, double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        fail(ErrorCode::InvalidArgument, "wavenumber must be non-negative");
    }
    const cplx r = r_of_K(c, k * c.ell);
    if (std::abs(r) > 1.0 + 1e-12 && (c.k_window_max <= 0.0 || k <= c.k_window_max)) {
        fail(ErrorCode::ModelNonPhysical,
             "effective-range model gives |r| = " + std::to_string(std::abs(r)) + " > 1");
    }
    return r;
}

cplx invert_to_kA(cplx r, double k) {
    if (!(k >= 0.0)) fail(ErrorCode::InvalidArgument, "wavenumber must be non-negative");
    if (std::abs(1.0 - r) < 1e-14) fail(ErrorCode::DegenerateR, "r = 1 has no finite kA");
    return -kI * (1.0 + r) / (1.0 - r);
}

EffectiveRangeCoefficients fit_coefficients(const PhysicalSetup& setup,
                                            const ReflectionData& data, double ell,
                                            double lo_eps_g, double hi_eps_g) {
    if (!(ell > 0.0)) fail(ErrorCode::InvalidArgument, "ell must be positive");
    if (!(hi_eps_g > lo_eps_g) || lo_eps_g < 0.0) {
        fail(ErrorCode::InvalidArgument, "empty fit window");
    }
    std::vector<double> ks;
    std::vector<cplx> ys;
    for (const auto& s : data.samples) {
        const double e = setup.energy_of_wavenumber(s.k) / setup.eps_g();
        // Energies recovered from k carry round-off; keep the closed upper edge.
        if (e <= lo_eps_g || e > hi_eps_g * (1.0 + 1e-12) || s.k <= 0.0) continue;
        const double K = s.k * ell;
        // alpha(K) from the data with the fixed i(pi/3)K term moved across.
        const cplx a = kI * invert_to_kA(s.r, s.k) / K;
        ks.push_back(K);
        ys.push_back(a - kI * (constants::pi / 3.0) * K);
    }
    const auto n = static_cast<Eigen::Index>(ks.size());
    if (n < kMinSamples) {
        fail(ErrorCode::WindowTooNarrow, "fit window holds " + std::to_string(n) +
                                             " samples, need at least 50");
    }
    Eigen::MatrixXcd A(n, 2);
    Eigen::VectorXcd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double K = ks[i];
        A(i, 0) = 1.0 + 4.0 / 3.0 * K * K * std::log(K);
        A(i, 1) = K * K;
        y(i) = ys[i];
    }
    // Column equilibration keeps the condition number about the data, not units.
    const Eigen::Vector2d scale(A.col(0).norm(), A.col(1).norm());
    if (scale.minCoeff() <= 0.0) fail(ErrorCode::IllConditionedFit, "degenerate fit basis");
    const Eigen::MatrixXcd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(1) <= 0.0 || sv(0) / sv(1) > kMaxCondition) {
        fail(ErrorCode::IllConditionedFit, "fit basis is numerically rank deficient");
    }
    const Eigen::VectorXcd x = svd.solve(y).cwiseQuotient(scale.cast<cplx>());

    EffectiveRangeCoefficients c;
    c.ell = ell;
    c.alpha0 = x(0);
    c.alpha2 = x(1);
    c.window_lo = lo_eps_g;
    c.window_hi = hi_eps_g;
    c.k_window_max = setup.wavenumber(hi_eps_g * setup.eps_g());
    c.residual = (A * x - y).norm() / std::sqrt(static_cast<double>(n));
    c.samples = static_cast<int>(n);
    c.source = data.surface.empty() ? "fit" : data.surface;
    return c;
}

ScatteringLength scattering_length(const EffectiveRangeCoefficients& c) {
    const cplx a = -kI * c.ell * c.alpha0;
    return {a, -a.imag()};
}

ReflectionData synthetic_reflection(const PhysicalSetup& setup,
                                    const EffectiveRangeCoefficients& c, double lo_eps_g,
                                    double hi_eps_g, int count) {
    if (!(hi_eps_g > lo_eps_g) || lo_eps_g < 0.0 || count < 1) {
        fail(ErrorCode::InvalidArgument, "empty or negative energy window");
    }
    ReflectionData data;
    data.surface = c.source;
    data.model = "effective-range";
    for (int i = 1; i <= count; ++i) {
        const double e = lo_eps_g + (hi_eps_g - lo_eps_g) * i / count;
        const double k = setup.wavenumber(e * setup.eps_g());
        data.samples.push_back({k, r_of_K(c, k * c.ell)});
    }
    return data;
}

}  // namespace qlev

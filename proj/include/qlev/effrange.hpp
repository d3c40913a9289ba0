#pragma once

#include <string>

#include "qlev/airy.hpp"
#include "qlev/potential.hpp"
#include "qlev/scatter.hpp"

namespace qlev {

/// Low-energy expansion of the reflection amplitude,
/// alpha(K) = alpha0 + i(pi/3) K + (alpha2 + (4/3) alpha0 ln K) K^2 with K = k ell.
struct EffectiveRangeCoefficients {
    double ell = 0.0;        // m
    cplx alpha0{1.0, 0.0};
    cplx alpha2{0.0, 0.0};
    double window_lo = 0.0;  // eps_g
    double window_hi = 0.0;  // eps_g
    /// Largest wavenumber of the window (1/m); r_model checks |r| <= 1 below it.
    double k_window_max = 0.0;
    /// RMS misfit of alpha over the fitted samples, zero for tabulated inputs.
    double residual = 0.0;
    int samples = 0;
    std::string source;
};

/// Exact values for a pure -C4/z^4 tail: alpha0 = 1 and
/// alpha2 = (8/3)(gamma + ln 2) - 28/9 - 2 pi i / 3.
EffectiveRangeCoefficients v4_coefficients(double ell);
EffectiveRangeCoefficients preset_coefficients(const SurfacePreset& preset);

/// alpha at complex K; K = 0 returns alpha0.
cplx alpha(const EffectiveRangeCoefficients& c, cplx K);

/// r = -(1 - w) / (1 + w) with w = K alpha(K), at complex K.
cplx r_of_K(const EffectiveRangeCoefficients& c, cplx K);

/// Model reflection amplitude at wavenumber k (1/m).
/// Throws ModelNonPhysical when |r| > 1 inside the fitted window.
cplx r_model(const EffectiveRangeCoefficients& c, double k);

/// Solves r = -(1 - i kA)/(1 + i kA) for kA.
cplx invert_to_kA(cplx r, double k);

/// Linear least-squares fit of (alpha0, alpha2) to reflection data whose
/// energies fall inside (lo, hi] (eps_g units).
EffectiveRangeCoefficients fit_coefficients(const PhysicalSetup& setup,
                                            const ReflectionData& data, double ell,
                                            double lo_eps_g, double hi_eps_g);

struct ScatteringLength {
    cplx a;    // m
    double b;  // -Im a, m
};

ScatteringLength scattering_length(const EffectiveRangeCoefficients& c);

/// Reflection data generated by the model itself on `count` energies in (lo, hi].
ReflectionData synthetic_reflection(const PhysicalSetup& setup,
                                    const EffectiveRangeCoefficients& c, double lo_eps_g,
                                    double hi_eps_g, int count);

}  // namespace qlev

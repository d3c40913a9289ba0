#pragma once

#include <complex>

namespace qlev {

using cplx = std::complex<double>;

struct AiryValues {
    cplx ai;
    cplx ai_prime;
    cplx bi;
    cplx bi_prime;
};

/// Travelling Airy combinations Ci+ = Ai + i Bi (upward wave) and
/// Ci- = Ai - i Bi (downward wave), with their derivatives.
struct TravelingWaves {
    cplx plus;
    cplx plus_prime;
    cplx minus;
    cplx minus_prime;
};

/// Ai, Ai', Bi, Bi' at complex z. Accurate to about 1e-13 relative for
/// |z| <= 30. Throws DomainTooLarge for |z| > 1e4 and Overflow when Bi is
/// not representable.
AiryValues airy_pair(cplx z);

/// Ai and Ai' only. Never overflows for |arg z| < pi/3.
std::pair<cplx, cplx> airy_ai(cplx z);

TravelingWaves traveling_waves(cplx z);

/// n-th zero of Ai on the negative axis, returned as a positive number.
double airy_zero(int n);

/// Continuous phase with tan(theta) = Ai(x)/Bi(x), theta(0) = pi/6, and
/// theta(-lambda_n) = n pi.
double airy_phase(double x);

/// Analytic continuation of airy_phase off the real axis along a vertical
/// path. Throws BranchTrackingFailure if the continuation cannot be resolved.
cplx airy_phase_complex(cplx z);

namespace detail {
// Individual evaluation branches, exposed for switchover tests.
std::pair<cplx, cplx> ai_maclaurin(cplx z);
std::pair<cplx, cplx> ai_asymptotic(cplx z);
std::pair<cplx, cplx> ai_taylor_step(cplx z0, cplx y, cplx dy, cplx z1);
inline constexpr double kSeriesRadius = 2.0;
inline constexpr double kAsymptoticRadius = 9.0;
}  // namespace detail

}  // namespace qlev

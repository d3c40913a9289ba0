#pragma once

// Reference values computed independently of the library: power series in
// long double, bisection on those series, and complex values tabulated from
// an arbitrary-precision evaluation.

#include <cmath>
#include <complex>

namespace oracle {

struct RealAiry {
    long double ai, aip, bi, bip;
};

// Maclaurin series Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g).
inline RealAiry airy_series(long double x) {
    const long double c1 = 0.355028053887817239260063186004183176L;
    const long double c2 = 0.258819403792806798405183560189203963L;
    const long double s3 = std::sqrt(3.0L);
    if (x == 0) return {c1, -c2, s3 * c1, s3 * c2};
    long double f = 0, fp = 0, g = 0, gp = 0;
    long double tf = 1, tg = x;  // terms in x^{3k} and x^{3k+1}
    for (int k = 0; k < 200; ++k) {
        f += tf;
        g += tg;
        fp += tf * 3 * k / x;
        gp += tg * (3 * k + 1) / x;
        const long double x3 = x * x * x;
        tf *= x3 / ((3.0L * k + 2) * (3.0L * k + 3));
        tg *= x3 / ((3.0L * k + 3) * (3.0L * k + 4));
        if (std::fabs(tf) < 1e-40L && std::fabs(tg) < 1e-40L && k > 5) break;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp, s3 * (c1 * f + c2 * g), s3 * (c1 * fp + c2 * gp)};
}

// n-th zero of Ai (returned positive) by bisection on the series.
inline double airy_zero_bisect(int n) {
    // Brackets from sign changes on a fine grid.
    int found = 0;
    long double prev_x = 0, prev = airy_series(0).ai;
    for (long double x = -0.01L; x > -12.0L; x -= 0.01L) {
        const long double v = airy_series(x).ai;
        if ((v < 0) != (prev < 0) && ++found == n) {
            long double lo = x, hi = prev_x;
            for (int i = 0; i < 200; ++i) {
                const long double mid = 0.5L * (lo + hi);
                if ((airy_series(mid).ai < 0) == (airy_series(lo).ai < 0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return static_cast<double>(-0.5L * (lo + hi));
        }
        prev = v;
        prev_x = x;
    }
    return NAN;
}

struct ComplexAiry {
    std::complex<double> z, ai, aip, bi, bip;
};

// Tabulated at 30 significant digits, printed to 17.
inline const ComplexAiry kComplexAiry[] = {
    {{1.5, 0.7}, {0.045105938329532003, -0.063625220367726074},
     {-0.077085755967575394, 0.076743855716388849}, {1.2636198877311369, 1.0719265547881944},
     {0.87802121132124016, 1.5565375466031548}},
    {{-3.2, 1.1}, {-1.5045859495997874, 0.30776160181462687},
     {0.91961666413974131, 2.530249722461485}, {-0.32864940342241713, -1.4514471062508129},
     {-2.6358047155161532, 0.90067338915734225}},
    {{-7.5, -0.4}, {0.53569356596418566, -0.15029161466990127},
     {0.49298382205552854, 1.178277315673646}, {-0.18485498970273383, -0.42718443017143815},
     {1.4721808756619557, -0.38669311419135094}},
    {{4.0, -2.5}, {0.00093875901146312051, -0.0017326420176302528},
     {-0.0010076713497828145, 0.0042321465684715915}, {7.9581659427363117, 36.316023056202952},
     {39.156119415195644, 69.164765043384711}},
    {{-12.0, 3.0}, {1795.8331665609355, 4711.404680557493},
     {15687.739254922095, -8191.7106624767485}, {-4711.4046884903477, 1795.8331623642203},
     {8191.7106735844786, 15687.739225305572}},
    {{0.3, -15.0}, {-46765232392.217968, -15272317488.428843},
     {170533500083.78085, -83760430195.344274}, {-15272317488.428843, 46765232392.217968},
     {-83760430195.344274, -170533500083.78085}},
    {{20.0, 5.0}, {-5.9676308416348442e-27, 3.1673357949253389e-27},
     {2.8710384506638522e-26, -1.1017028836445644e-26},
     {-4.8457873806867396e+24, -1.8541521505499463e+24},
     {-2.0745628348125367e+25, -1.1036394699207476e+25}},
};

// Principal arctan(Ai/Bi) at points just below the real axis near the
// third and first zeros; the continued phase adds n pi.
struct PhasePoint {
    std::complex<double> z;
    std::complex<double> principal;
    int branch;
};
inline const PhasePoint kComplexPhase[] = {
    {{-5.52, -0.0049}, {-0.0013190731950187386, 0.011522882310050071}, 3},
    {{-2.3376, -0.0049}, {-0.00078751916807493561, 0.0075683043032165804}, 1},
};

// Zeros of Ai at 20 digits.
inline constexpr double kAiryZeros[] = {2.3381074104597670385, 4.0879494441309706166,
                                        5.5205598280955510591};
inline constexpr double kAiryZero10 = 12.8287767528657572;
inline constexpr double kAiryZero20 = 20.53733290767756636;

}  // namespace oracle

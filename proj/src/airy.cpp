#include "qlev/airy.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qlev/constants.hpp"
#include "qlev/error.hpp"
#include "qlev/numerics.hpp"

namespace qlev {

namespace {

using constants::pi;

constexpr double kAi0 = 0.355028053887817239260063186004183176;   // Ai(0)
constexpr double kAip0 = -0.258819403792806798405183560189203963; // Ai'(0)
constexpr double kMaxLog = 700.0;
constexpr double kMaxModulus = 1e4;
constexpr double kTaylorStep = 0.5;
constexpr int kAsymptoticTerms = 64;

struct AsymptoticCoefficients {
    std::array<double, kAsymptoticTerms> u{};
    std::array<double, kAsymptoticTerms> v{};
    AsymptoticCoefficients() {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 1; k < kAsymptoticTerms; ++k) {
            const double kk = k;
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
                   ((2 * kk - 1) * 216.0 * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};

const AsymptoticCoefficients& coeffs() {
    static const AsymptoticCoefficients c;
    return c;
}

// Sums sum_k (-1)^k c_k x^-k over the requested parity, stopping at the
// smallest term of the divergent series.
cplx alternating_sum(const std::array<double, kAsymptoticTerms>& c, cplx inv,
                     int parity) {
    cplx sum = 0.0;
    cplx power = parity == 0 ? cplx(1.0) : inv;
    const cplx inv2 = inv * inv;
    double last = INFINITY;
    for (int k = parity, sign_index = 0; k < kAsymptoticTerms;
         k += 2, ++sign_index) {
        const cplx term = (sign_index % 2 == 0 ? 1.0 : -1.0) * c[k] * power;
        const double mag = std::abs(term);
        if (mag > last) break;
        sum += term;
        if (mag <= 1e-17 * std::abs(sum)) break;
        last = mag;
        power *= inv2;
    }
    return sum;
}

cplx plain_sum(const std::array<double, kAsymptoticTerms>& c, cplx inv) {
    cplx sum = 0.0;
    cplx power = 1.0;
    double last = INFINITY;
    for (int k = 0; k < kAsymptoticTerms; ++k) {
        const cplx term = ((k % 2 == 0) ? 1.0 : -1.0) * c[k] * power;
        const double mag = std::abs(term);
        if (mag > last) break;
        sum += term;
        if (mag <= 1e-17 * std::abs(sum)) break;
        last = mag;
        power *= inv;
    }
    return sum;
}

cplx normalize_zero_imag(cplx z) {
    return z.imag() == 0.0 ? cplx(z.real(), 0.0) : z;
}

// Ai and Ai' for Im z >= 0.
std::pair<cplx, cplx> ai_upper(cplx z) {
    const double r = std::abs(z);
    if (r <= detail::kSeriesRadius) return detail::ai_maclaurin(z);
    if (r >= detail::kAsymptoticRadius) return detail::ai_asymptotic(z);

    const double phase = std::arg(z);
    const cplx dir = std::polar(1.0, phase);
    if (std::abs(phase) < pi / 3.0) {
        // Ai is recessive here, so integrate inward from the outer radius.
        const cplx start = detail::kAsymptoticRadius * dir;
        auto [y, dy] = detail::ai_asymptotic(start);
        return detail::ai_taylor_step(start, y, dy, z);
    }
    const cplx start = detail::kSeriesRadius * dir;
    auto [y, dy] = detail::ai_maclaurin(start);
    return detail::ai_taylor_step(start, y, dy, z);
}

void check_domain(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(ErrorCode::InvalidArgument, "Airy argument is not finite");
    }
    if (std::abs(z) > kMaxModulus) {
        fail(ErrorCode::DomainTooLarge,
             "Airy argument modulus exceeds 1e4: " + std::to_string(std::abs(z)));
    }
}

cplx zeta_of(cplx z) { return 2.0 / 3.0 * z * std::sqrt(z); }

}  // namespace

namespace detail {

std::pair<cplx, cplx> ai_maclaurin(cplx z) {
    // Ai = c1 f - c2 g with the two standard power series.
    const cplx z3 = z * z * z;
    cplx f = 1.0, df = 0.0, g = z, dg = 1.0;
    cplx tf = 1.0, tg = z;
    cplx tdf = z * z / 2.0, tdg = 1.0;
    df = tdf;
    for (int k = 1; k < 200; ++k) {
        const double kk = k;
        tf *= z3 / ((3 * kk - 1) * (3 * kk));
        tg *= z3 / ((3 * kk) * (3 * kk + 1));
        tdg *= z3 / ((3 * kk) * (3 * kk - 2));
        if (k >= 2) tdf *= z3 / ((3 * kk - 1) * (3 * kk - 3));
        f += tf;
        g += tg;
        dg += tdg;
        if (k >= 2) df += tdf;
        const double scale = std::abs(f) + std::abs(g) + std::abs(df) + std::abs(dg);
        if (std::abs(tf) + std::abs(tg) + std::abs(tdf) + std::abs(tdg) <
            1e-18 * scale) {
            break;
        }
    }
    return {kAi0 * f + kAip0 * g, kAi0 * df + kAip0 * dg};
}

std::pair<cplx, cplx> ai_asymptotic(cplx z) {
    const auto& c = coeffs();
    const double phase = std::arg(z);
    if (std::abs(phase) <= 2.0 * pi / 3.0) {
        const cplx zeta = zeta_of(z);
        if (-zeta.real() > kMaxLog) {
            fail(ErrorCode::Overflow, "Ai overflows at this argument");
        }
        const cplx inv = 1.0 / zeta;
        const cplx e = std::exp(-zeta) / (2.0 * std::sqrt(pi));
        const cplx q = std::sqrt(std::sqrt(z));
        return {e / q * plain_sum(c.u, inv), -e * q * plain_sum(c.v, inv)};
    }
    const cplx w = -z;
    const cplx xi = zeta_of(w);
    if (std::abs(xi.imag()) > kMaxLog) {
        fail(ErrorCode::Overflow, "Ai overflows at this argument");
    }
    const cplx inv = 1.0 / xi;
    const cplx s = std::sin(xi - pi / 4.0);
    const cplx co = std::cos(xi - pi / 4.0);
    const cplx q = std::sqrt(std::sqrt(w));
    const double rpi = 1.0 / std::sqrt(pi);
    const cplx ai = rpi / q *
                    (co * alternating_sum(c.u, inv, 0) +
                     s * alternating_sum(c.u, inv, 1));
    const cplx aip = rpi * q *
                     (s * alternating_sum(c.v, inv, 0) -
                      co * alternating_sum(c.v, inv, 1));
    return {ai, aip};
}

std::pair<cplx, cplx> ai_taylor_step(cplx z0, cplx y, cplx dy, cplx z1) {
    const cplx span = z1 - z0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kTaylorStep)));
    const cplx h = span / static_cast<double>(steps);
    cplx z = z0;
    for (int s = 0; s < steps; ++s) {
        // a_{n+2} = h^2 (z a_n + h a_{n-1}) / ((n+1)(n+2)) for y'' = z y.
        cplx am1 = 0.0, a0 = y, a1 = h * dy;
        cplx sum = a0 + a1;
        cplx dsum = a1;
        int quiet = 0;
        for (int n = 0; n < 200; ++n) {
            const cplx a2 = h * h * (z * a0 + h * am1) / ((n + 1.0) * (n + 2.0));
            sum += a2;
            dsum += (n + 2.0) * a2;
            const double scale = std::abs(sum) + std::abs(dsum);
            if (std::abs(a2) * (n + 3.0) < 1e-18 * scale) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
            am1 = a0;
            a0 = a1;
            a1 = a2;
        }
        y = sum;
        dy = dsum / h;
        z += h;
    }
    return {y, dy};
}

}  // namespace detail

std::pair<cplx, cplx> airy_ai(cplx z) {
    check_domain(z);
    z = normalize_zero_imag(z);
    if (z.imag() < 0.0) {
        auto [a, ap] = ai_upper(std::conj(z));
        return {std::conj(a), std::conj(ap)};
    }
    auto [a, ap] = ai_upper(z);
    if (z.imag() == 0.0) return {cplx(a.real(), 0.0), cplx(ap.real(), 0.0)};
    return {a, ap};
}

AiryValues airy_pair(cplx z) {
    check_domain(z);
    z = normalize_zero_imag(z);
    if (std::abs(zeta_of(z.imag() < 0 ? std::conj(z) : z).real()) > kMaxLog) {
        fail(ErrorCode::Overflow, "Bi overflows at this argument");
    }
    const bool lower = z.imag() < 0.0;
    const cplx zu = lower ? std::conj(z) : z;

    const cplx omega = std::polar(1.0, 2.0 * pi / 3.0);
    const cplx e6 = std::polar(1.0, pi / 6.0);
    auto [a, ap] = airy_ai(zu);
    auto [a1, ap1] = airy_ai(zu * omega);
    auto [a2, ap2] = airy_ai(zu * std::conj(omega));
    cplx bi = e6 * a1 + std::conj(e6) * a2;
    cplx bip = e6 * omega * ap1 + std::conj(e6 * omega) * ap2;
    if (zu.imag() == 0.0) {
        bi = bi.real();
        bip = bip.real();
    }
    if (!std::isfinite(std::abs(bi)) || !std::isfinite(std::abs(bip))) {
        fail(ErrorCode::Overflow, "Bi is not representable");
    }
    AiryValues v{a, ap, bi, bip};
    if (lower) {
        v = {std::conj(a), std::conj(ap), std::conj(bi), std::conj(bip)};
    }
    return v;
}

TravelingWaves traveling_waves(cplx z) {
    check_domain(z);
    z = normalize_zero_imag(z);
    const cplx rot = std::polar(1.0, 2.0 * pi / 3.0);
    const cplx e3 = std::polar(1.0, pi / 3.0);
    auto [ap, app] = airy_ai(z * std::conj(rot));
    TravelingWaves w;
    w.plus = 2.0 * e3 * ap;
    w.plus_prime = 2.0 * std::conj(e3) * app;
    if (z.imag() == 0.0) {
        w.minus = std::conj(w.plus);
        w.minus_prime = std::conj(w.plus_prime);
    } else {
        auto [am, amp] = airy_ai(z * rot);
        w.minus = 2.0 * std::conj(e3) * am;
        w.minus_prime = 2.0 * e3 * amp;
    }
    return w;
}

double airy_zero(int n) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "Airy zero index must be >= 1");
    const double t = 3.0 * pi / 8.0 * (4.0 * n - 1.0);
    const double t2 = 1.0 / (t * t);
    const double seed =
        std::pow(t, 2.0 / 3.0) *
        (1.0 + t2 * (5.0 / 48.0 +
                     t2 * (-5.0 / 36.0 +
                           t2 * (77125.0 / 82944.0 - t2 * 108056875.0 / 6967296.0))));
    auto f = [](double x) { return airy_ai(cplx(-x, 0.0)).first.real(); };
    const double half = 0.3 * pi / std::sqrt(seed);
    return numerics::find_root(f, seed - half, seed + half, 53);
}

double airy_phase(double x) {
    if (x > 60.0) {
        // Ai/Bi ~ exp(-2 zeta)/2 underflows long before Bi overflows.
        const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
        return 0.5 * std::exp(-2.0 * zeta);
    }
    const AiryValues v = airy_pair(cplx(x, 0.0));
    const double raw = std::atan2(v.ai.real(), v.bi.real());
    if (x >= 0.0) return raw;
    const double estimate = 2.0 / 3.0 * std::pow(-x, 1.5) + pi / 4.0;
    const double j = std::round((estimate - raw) / (2.0 * pi));
    return raw + 2.0 * pi * j;
}

cplx airy_phase_complex(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double theta0 = airy_phase(x);
    if (y == 0.0) return theta0;

    auto ratio = [](cplx p) {
        const TravelingWaves w = traveling_waves(p);
        return -w.minus / w.plus;
    };
    for (int steps = std::max(4, static_cast<int>(std::ceil(std::abs(y) / 0.05)));
         steps <= (1 << 16); steps *= 2) {
        cplx theta = theta0;
        cplx prev = ratio(cplx(x, 0.0));
        bool ok = true;
        for (int k = 1; k <= steps; ++k) {
            const cplx next = ratio(cplx(x, y * k / steps));
            const cplx d = std::log(next / prev);
            if (!std::isfinite(d.real()) || std::abs(d.imag()) >= pi / 2.0) {
                ok = false;
                break;
            }
            theta += d / cplx(0.0, 2.0);
            prev = next;
        }
        if (ok) return theta;
    }
    fail(ErrorCode::BranchTrackingFailure,
         "phase continuation could not resolve the branch");
}

}  // namespace qlev

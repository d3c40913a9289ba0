#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qlev/constants.hpp"
#include "qlev/error.hpp"
#include "qlev/potential.hpp"

using namespace qlev;
using doctest::Approx;

namespace {
ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

double fd(const PotentialModel& m, double z, int order, double h) {
    return (m.derivative(z + h, order) - m.derivative(z - h, order)) / (2 * h);
}
}  // namespace

TEST_CASE("gravity scales for hydrogen") {
    const PhysicalSetup s;
    CHECK(s.ell_g() == Approx(5.87e-6).epsilon(2e-3));
    CHECK(s.eps_g() / (1e-12 * constants::electron_volt) == Approx(0.602).epsilon(2e-3));
    CHECK(s.eps_g() / s.ell_g() == Approx(s.mass() * s.gravity()).epsilon(1e-15));
    const double l3 = std::pow(s.ell_g(), 3);
    CHECK(l3 == Approx(constants::hbar * constants::hbar /
                       (2 * s.mass() * s.mass() * s.gravity()))
                    .epsilon(1e-14));
    for (double e : {1e-33, 3e-31, 7e-29}) {
        CHECK(s.energy_of_wavenumber(s.wavenumber(e)) == Approx(e).epsilon(1e-14));
        CHECK((e / s.eps_g()) * s.eps_g() == Approx(e).epsilon(1e-14));
    }
}

TEST_CASE("setup scales with gravity and validates inputs") {
    const PhysicalSetup a, b(constants::hydrogen_mass, 4 * constants::standard_gravity);
    CHECK(b.eps_g() / a.eps_g() == Approx(std::pow(4.0, 2.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(PhysicalSetup(-1.0, 9.81), Error);
    CHECK_THROWS_AS(PhysicalSetup(1e-27, 0.0), Error);
}

TEST_CASE("F function") {
    const PhysicalSetup s;
    const auto hw = PotentialModel::hard_wall();
    const double e = 3.0 * s.eps_g();
    CHECK(std::abs(f_function(s, hw, e, e / (s.mass() * s.gravity()))) < 1e-12 / std::pow(s.ell_g(), 2));
    CHECK(f_function(s, hw, s.eps_g(), 1e-30) ==
          Approx(1.0 / (s.ell_g() * s.ell_g())).epsilon(1e-12));
    CHECK(code_of([&] { f_function(s, hw, e, 0.0); }) == ErrorCode::NonPositiveAltitude);
}

TEST_CASE("CP scales of the perfect-mirror preset") {
    const PhysicalSetup s;
    const auto& p = find_preset("perfect-mirror");
    const auto v4 = PotentialModel::homogeneous_v4(p.c4(s));
    const auto sc = cp_scales(s, v4);
    CHECK(sc.ell == Approx(27.5e-9).epsilon(2e-3));
    CHECK(sc.eps / (1e-9 * constants::electron_volt) == Approx(27.4).epsilon(2e-3));
    CHECK(v4.value(sc.ell) == Approx(-sc.eps).epsilon(1e-14));

    const auto big = PotentialModel::homogeneous_v4(16 * p.c4(s));
    const auto sb = cp_scales(s, big);
    CHECK(sb.ell / sc.ell == Approx(4.0).epsilon(1e-14));
    CHECK(sb.eps / sc.eps == Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(code_of([&] { cp_scales(s, PotentialModel::hard_wall()); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("V3V4 interpolant limits") {
    const double c3 = 2.0e-49, c4 = 5.0e-57;
    const double zc = c4 / c3;
    const auto m = PotentialModel::v3v4(c3, c4);
    CHECK(m.value(zc) == Approx(-c4 / (2 * std::pow(zc, 4))).epsilon(1e-14));
    CHECK(std::pow(1e-6 * zc, 3) * m.value(1e-6 * zc) == Approx(-c3).epsilon(1e-5));
    CHECK(std::pow(1e6 * zc, 4) * m.value(1e6 * zc) == Approx(-c4).epsilon(1e-5));
    for (double z = 0.01 * zc; z < 100 * zc; z *= 1.7) {
        CHECK(m.value(z) < 0.0);
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-4 * z;
            CHECK(m.derivative(z, k + 1) == Approx(fd(m, z, k, h)).epsilon(1e-6));
        }
    }
    CHECK(code_of([&] { m.value(-1e-9); }) == ErrorCode::NonPositiveAltitude);
}

TEST_CASE("homogeneous V4 derivatives") {
    const auto m = PotentialModel::homogeneous_v4(3.0e-56);
    for (double z : {1e-9, 3e-8, 1e-6}) {
        CHECK(m.derivative(z, 1) == Approx(4 * 3.0e-56 / std::pow(z, 5)).epsilon(1e-14));
        CHECK(m.derivative(z, 4) == Approx(-840 * 3.0e-56 / std::pow(z, 8)).epsilon(1e-14));
    }
}

TEST_CASE("tabulated potential reproduces the generating V3V4 model") {
    const double c3 = 2.0e-49, c4 = 5.0e-57;
    const auto ref = PotentialModel::v3v4(c3, c4);
    std::vector<double> z, v;
    for (int i = 0; i < 400; ++i) {
        z.push_back(1e-10 * std::pow(1e4, i / 399.0));
        v.push_back(ref.value(z.back()));
    }
    const auto tab = PotentialModel::tabulated(z, v);
    CHECK(tab.kind() == PotentialKind::Tabulated);
    for (double x = 1.3e-10; x < 9e-7; x *= 1.9) {
        CHECK(tab.value(x) == Approx(ref.value(x)).epsilon(1e-6));
        CHECK(tab.derivative(x, 1) == Approx(ref.derivative(x, 1)).epsilon(1e-4));
        CHECK(tab.derivative(x, 2) == Approx(ref.derivative(x, 2)).epsilon(1e-3));
    }
    // Tails: fitted power laws within 1%.
    CHECK(tab.c4() == Approx(c4).epsilon(1e-2));
    CHECK(tab.c3() == Approx(c3).epsilon(1e-2));
    CHECK(std::pow(1e-4, 4) * tab.value(1e-4) == Approx(-c4).epsilon(1e-2));
    CHECK(std::pow(1e-12, 3) * tab.value(1e-12) == Approx(-c3).epsilon(1e-2));
}

TEST_CASE("tabulated input validation") {
    std::vector<double> z, v;
    for (int i = 0; i < 50; ++i) {
        z.push_back(1e-9 * (i + 1));
        v.push_back(-1e-30 / (i + 1));
    }
    CHECK(code_of([&] { PotentialModel::tabulated(z, v); }) == ErrorCode::TableTooSparse);
    for (int i = 50; i < 120; ++i) {
        z.push_back(1e-9 * (i + 1));
        v.push_back(-1e-30 / (i + 1));
    }
    auto bad = z;
    bad[60] = bad[59];
    CHECK(code_of([&] { PotentialModel::tabulated(bad, v); }) == ErrorCode::TableParseError);
    CHECK_NOTHROW(PotentialModel::tabulated(z, v));
}

TEST_CASE("scaled potentials") {
    const PhysicalSetup s;
    const auto m = PotentialModel::homogeneous_v4(find_preset("silica").c4(s));
    const auto g = gravity_units(s, m);
    const auto c = cp_units(s, m);
    CHECK(c(1.0) == Approx(-1.0).epsilon(1e-14));
    const double x = 0.01;
    CHECK(g(x) == Approx(m.value(x * s.ell_g()) / s.eps_g()).epsilon(1e-14));
    CHECK(g(x, 2) ==
          Approx(m.derivative(x * s.ell_g(), 2) * s.ell_g() * s.ell_g() / s.eps_g()).epsilon(1e-14));
    CHECK(gravity_units(s, PotentialModel::hard_wall())(0.3) == 0.0);
}

TEST_CASE("surface presets") {
    CHECK(builtin_presets().size() == 3);
    const auto& p = find_preset("Perfect Mirror");
    CHECK(p.name == "perfect-mirror");
    CHECK(p.ell_a0 == 520.06);
    CHECK(p.alpha0 == cplx(1.0468, -0.1028));
    CHECK(find_preset("silica").alpha2 == cplx(0.70, -4.8));
    CHECK(find_preset("SILICON").ell_a0 == 429.82);
    CHECK(code_of([] { find_preset("gold"); }) == ErrorCode::ConfigError);
    const PhysicalSetup s;
    CHECK(p.c4(s) == Approx(c4_from_length(s, p.ell())).epsilon(1e-15));
    CHECK(p.c3() == 0.0);
}

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qlev/airy.hpp"
#include "qlev/potential.hpp"

namespace qlev {

struct SolverOptions {
    /// Relative tolerance of the embedded Runge-Kutta pair.
    double rtol = 1e-10;
    /// |Q| threshold that places the inner WKB boundary.
    double badlands_threshold = 1e-6;
    /// |V_CP| / (hbar^2 k^2 / 2m) threshold that places the outer matching point.
    double tail_threshold = 1e-8;
    /// Distance above the turning point (ell_g units) where the round-trip
    /// solution is decomposed onto Airy travelling waves.
    double matching_offset = 0.25;
    /// Integrate the whole round trip in the original coordinate instead of
    /// crossing the wall in the Langer coordinate.
    bool original_coordinates_only = false;
};

/// Full result of one quantum-reflection solve on the CP tail.
struct ReflectionSolve {
    double k = 0.0;               // 1/m
    cplx r;
    double transmission = 0.0;    // flux absorbed by the surface
    double flux_error = 0.0;      // | |r|^2 + transmission - 1 |
    double x_min = 0.0;           // inner boundary, ell_CP units
    double x_max = 0.0;           // outer matching point, ell_CP units
    std::size_t steps = 0;
};

ReflectionSolve solve_reflection(const PhysicalSetup& setup, const PotentialModel& model,
                                 double k, const SolverOptions& options = {});

/// Reflection amplitude for an atom incident with wavenumber k on the CP
/// potential alone, referred to exp(-ikz) + r exp(ikz).
cplx reflection_amplitude(const PhysicalSetup& setup, const PotentialModel& model,
                          double k, const SolverOptions& options = {});

struct ReflectionSample {
    double k;  // 1/m
    cplx r;
};

struct ReflectionData {
    std::vector<ReflectionSample> samples;
    std::string surface;
    std::string model;
};

/// r(k) on `count` energies evenly spaced in (lo, hi] (eps_g units).
ReflectionData scan_reflection(const PhysicalSetup& setup, const PotentialModel& model,
                               double lo_eps_g, double hi_eps_g, int count,
                               const SolverOptions& options = {});

/// Round trip of the atom between gravity and the surface:
/// a_{m+1} = rho a_m.
struct RoundTrip {
    cplx energy;                    // J
    cplx rho;
    double transmission_loss = 0.0; // 1 - |rho|^2
    double flux_error = 0.0;        // mismatch of the flux balance
    cplx a;                         // downward Ci- amplitude
    cplx c;                         // upward Ci+ amplitude
};

RoundTrip round_trip_factor(const PhysicalSetup& setup, const PotentialModel& model,
                            double energy, const SolverOptions& options = {});

/// Analytic continuation to complex energy, integrated in the original
/// coordinate and matched to Ci(y - E) with complex argument.
RoundTrip round_trip_factor(const PhysicalSetup& setup, const PotentialModel& model,
                            cplx energy, const SolverOptions& options = {});

}  // namespace qlev

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qlev/airy.hpp"
#include "qlev/effrange.hpp"
#include "qlev/potential.hpp"
#include "qlev/scatter.hpp"

namespace qlev {

enum class ResonanceMethod { Numeric, EffectiveRange, ScatteringLength };

const char* resonance_method_name(ResonanceMethod m);

struct ResonanceRecord {
    int n = 0;
    double E_real = 0.0;                // J, root of arg rho = 0
    std::optional<cplx> E_complex;      // J, pole of rho / (1 - rho)
    ResonanceMethod method = ResonanceMethod::Numeric;
    double lifetime = 0.0;              // s, from Im E_complex (infinite if none)
    double survival = 1.0;              // |rho(E_real)|
};

/// lambda_n eps_g for n = 1..n_max.
std::vector<double> ideal_levels(const PhysicalSetup& setup, int n_max);

/// lambda_n eps_g + m g a.
std::vector<cplx> scattering_length_levels(const PhysicalSetup& setup, cplx a, int n_max);
std::vector<ResonanceRecord> scattering_length_records(const PhysicalSetup& setup,
                                                       const EffectiveRangeCoefficients& c,
                                                       int n_max);

/// Real resonances from the integrated round trip of `model`.
std::vector<ResonanceRecord> resonances_numeric(const PhysicalSetup& setup,
                                                const PotentialModel& model, int n_max,
                                                const SolverOptions& options = {});

/// Real resonances of theta(-E) + arg(-r(K))/2 = n pi with r from the expansion.
std::vector<ResonanceRecord> resonances_effective_range(const PhysicalSetup& setup,
                                                        const EffectiveRangeCoefficients& c,
                                                        int n_max);

/// f = rho / (1 - rho).
cplx response_function(cplx rho);

/// Round-trip factor r(K) Ci-(-E)/Ci+(-E) at complex E in eps_g units.
cplx rho_effective_range(const PhysicalSetup& setup, const EffectiveRangeCoefficients& c,
                         cplx e_eps_g);

/// Poles of the response function by Newton iteration on rho(E) = 1.
std::vector<cplx> complex_poles(const PhysicalSetup& setup, const EffectiveRangeCoefficients& c,
                                int n_max);
std::vector<cplx> complex_poles(const PhysicalSetup& setup, const PotentialModel& model,
                                int n_max, const SolverOptions& options = {});

/// Newton solve of rho(E) = 1 for one pole, E in eps_g units.
cplx find_pole(const std::function<cplx(cplx)>& rho, cplx seed);

/// |f|^2 ~ amplitude / ((E - center)^2 + half_width^2), in the units of the samples.
struct LorentzianPeak {
    double center = 0.0;
    double half_width = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;  // RMS relative misfit
};

struct ResponseSample {
    double E;         // eps_g
    double abs_f_sq;
};

LorentzianPeak lorentzian_fit(const std::vector<ResponseSample>& samples);

std::vector<ResponseSample> response_scan(const std::function<cplx(double)>& rho, double lo,
                                          double hi, int count);

/// Locates local maxima of a response scan, resamples each on +-3 half-widths
/// and fits a Lorentzian.
std::vector<LorentzianPeak> fit_peaks(const std::function<cplx(double)>& rho,
                                      const std::vector<ResponseSample>& grid,
                                      int samples_per_peak = 41);

/// Samples |f|^2 on center +- span half-widths around an expected pole and fits it.
LorentzianPeak fit_peak_near(const std::function<cplx(double)>& rho, cplx pole, double span = 3.0,
                             int count = 41);

/// -hbar / (2 Im E_complex).
double lifetime(const ResonanceRecord& record);
/// hbar / (2 m g b).
double scattering_length_lifetime(const PhysicalSetup& setup, double b);

/// (Re E_n - Re E_m) / hbar for each (m, n) pair, rad/s.
std::vector<double> transition_frequencies(const std::vector<ResonanceRecord>& records,
                                           const std::vector<std::pair<int, int>>& pairs);

}  // namespace qlev

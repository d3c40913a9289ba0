#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlev/airy.hpp"
#include "qlev/constants.hpp"

namespace qlev {

/// Atom mass and local gravity, plus the derived gravitational scales.
class PhysicalSetup {
public:
    explicit PhysicalSetup(double mass = constants::hydrogen_mass,
                           double gravity = constants::standard_gravity);

    double mass() const { return mass_; }
    double gravity() const { return gravity_; }

    /// (hbar^2 / (2 m^2 g))^(1/3)
    double ell_g() const { return ell_g_; }
    /// m g ell_g
    double eps_g() const { return eps_g_; }

    /// Free-fall wavenumber sqrt(2 m E) / hbar.
    double wavenumber(double energy) const;
    double energy_of_wavenumber(double k) const;

private:
    double mass_;
    double gravity_;
    double ell_g_;
    double eps_g_;
};

enum class PotentialKind { HardWall, HomogeneousV4, V3V4, Tabulated };

const char* potential_kind_name(PotentialKind kind);

struct CpScales {
    double ell;  // sqrt(2 m C4) / hbar
    double eps;  // hbar^2 / (2 m ell^2)
};

/// Atom-surface potential V_CP(z) for z > 0, negative and monotonically
/// increasing towards zero. The hard wall variant has no attractive part and
/// stands for an ideal reflector at z = 0.
class PotentialModel {
public:
    static PotentialModel hard_wall();
    /// V = -C4 / z^4, C4 in J m^4.
    static PotentialModel homogeneous_v4(double c4);
    /// V = -C4 / (z^3 (z + C4/C3)), C3 in J m^3 and C4 in J m^4.
    static PotentialModel v3v4(double c3, double c4);
    /// Natural cubic spline through (ln z, ln(-V)) with power-law tails
    /// -C3/z^3 and -C4/z^4 fitted to the innermost and outermost tenth of
    /// the samples. Needs at least 100 strictly increasing positive z values
    /// and strictly negative V.
    static PotentialModel tabulated(std::vector<double> z_m, std::vector<double> v_joule);

    PotentialKind kind() const { return kind_; }
    bool has_wall() const { return kind_ == PotentialKind::HardWall; }

    /// Short-range coefficient; zero when the model has no 1/z^3 regime.
    double c3() const { return c3_; }
    /// Long-range coefficient; zero for the hard wall.
    double c4() const { return c4_; }

    /// V(z) in joules.
    double value(double z) const { return derivative(z, 0); }
    /// d^n V / dz^n in J / m^n for n in 0..4.
    double derivative(double z, int order) const;

private:
    struct Table;
    PotentialKind kind_ = PotentialKind::HardWall;
    double c3_ = 0.0;
    double c4_ = 0.0;
    std::shared_ptr<const Table> table_;
};

double cp_potential(const PotentialModel& model, double z);

/// F(z) = 2m (E - m g z - V(z)) / hbar^2, in 1/m^2.
double f_function(const PhysicalSetup& setup, const PotentialModel& model,
                  double energy, double z);

CpScales cp_scales(const PhysicalSetup& setup, const PotentialModel& model);

/// C4 = hbar^2 ell^2 / (2 m) for a given length ell.
double c4_from_length(const PhysicalSetup& setup, double ell);

/// The potential in rescaled units: v(x) = V(x L) / E_unit and its
/// x-derivatives.
class ScaledPotential {
public:
    ScaledPotential(PotentialModel model, double length_unit, double energy_unit)
        : model_(std::move(model)), length_(length_unit), energy_(energy_unit) {}

    const PotentialModel& model() const { return model_; }
    double length_unit() const { return length_; }
    double energy_unit() const { return energy_; }

    double operator()(double x, int order = 0) const;

private:
    PotentialModel model_;
    double length_;
    double energy_;
};

/// Lengths in ell_g and energies in eps_g.
ScaledPotential gravity_units(const PhysicalSetup& setup, const PotentialModel& model);
/// Lengths in ell_CP and energies in eps_CP.
ScaledPotential cp_units(const PhysicalSetup& setup, const PotentialModel& model);

/// Surface parameters of the effective-range description.
struct SurfacePreset {
    std::string name;
    double ell_a0 = 0.0;
    cplx alpha0;
    cplx alpha2;
    std::optional<double> c3_au;
    std::optional<double> c4_au;

    double ell() const { return ell_a0 * constants::bohr_radius; }
    /// C4 in J m^4: the explicit value when given, otherwise from ell.
    double c4(const PhysicalSetup& setup) const;
    /// C3 in J m^3, zero when absent.
    double c3() const;
};

/// Perfect mirror, silicon and silica.
const std::vector<SurfacePreset>& builtin_presets();
/// Lookup by name, case-insensitive; accepts "perfect-mirror" style names.
const SurfacePreset& find_preset(const std::string& name);

}  // namespace qlev

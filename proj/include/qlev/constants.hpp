#pragma once

// CODATA 2018 values in SI units.
namespace qlev::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double hartree = 4.3597447222071e-18;   // J
inline constexpr double electron_volt = 1.602176634e-19; // J
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double hydrogen_mass = 1.00782503223 * atomic_mass_unit;
inline constexpr double standard_gravity = 9.81; // m/s^2, rounded local value

inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

}  // namespace qlev::constants

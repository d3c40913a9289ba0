#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qlev/cavity.hpp"
#include "qlev/effrange.hpp"
#include "qlev/liouville.hpp"
#include "qlev/potential.hpp"
#include "qlev/scatter.hpp"

namespace qlev::io {

/// Full-precision decimal text for a double (17 significant digits).
std::string format_double(double x);

/// Tabulated potential from CSV with header `z_m,V_eV`.
/// Row numbers in errors count the header as row 1.
PotentialModel read_table_csv(std::istream& in);
PotentialModel load_table_csv(const std::string& path);

/// Surface presets from JSON: a single object, an array of objects, or an
/// object with a "presets" array. Fields: name, ell_a0, alpha0_re, alpha0_im,
/// alpha2_re, alpha2_im and optionally C3_au, C4_au.
std::vector<SurfacePreset> parse_presets_json(const std::string& text);
std::vector<SurfacePreset> load_presets_json(const std::string& path);

std::string coefficients_to_json(const EffectiveRangeCoefficients& c);
EffectiveRangeCoefficients coefficients_from_json(const std::string& text);

/// Rectangular output shared by the CSV and JSON emitters. Empty cells are
/// written as blank CSV fields and JSON nulls.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& out, const Table& table);
/// JSON array with one object per row.
void write_json(std::ostream& out, const Table& table);

/// Energies are divided by `unit` and their columns carry `suffix`
/// (E_over_epsg with the defaults below).
struct EnergyUnit {
    double joule;
    std::string suffix = "over_epsg";
};

Table reflection_table(const ReflectionData& data);
Table resonance_table(const std::vector<ResonanceRecord>& records, const std::string& surface,
                      const EnergyUnit& unit);
/// Sample energies are in eps_g; `eps_g` converts them to the requested unit.
Table response_table(const std::vector<ResponseSample>& samples, double eps_g,
                     const EnergyUnit& unit);
/// `z_m,bold_z,bold_F,Q` on the map's own grid; bold_z in ell_g units.
Table langer_table(const LangerMap& map);

void write_reflection_csv(std::ostream& out, const ReflectionData& data);
ReflectionData read_reflection_csv(std::istream& in);
void write_resonance_csv(std::ostream& out, const std::vector<ResonanceRecord>& records,
                         const std::string& surface, double eps_g);
void write_response_csv(std::ostream& out, const std::vector<ResponseSample>& samples);
void write_langer_csv(std::ostream& out, const LangerMap& map);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace qlev::io

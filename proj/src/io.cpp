#include "qlev/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "qlev/constants.hpp"
#include "qlev/error.hpp"

namespace qlev::io {

using nlohmann::json;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* end = t.data() + t.size();
    auto res = std::from_chars(t.data(), end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open '" + path + "'");
    return in;
}

std::string read_all(const std::string& path) {
    std::ifstream in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double number_field(const json& j, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) fail(ErrorCode::ConfigError, std::string("missing field '") + key + "'");
        return 0.0;
    }
    const json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        double x;
        if (parse_double(v.get<std::string>(), x)) return x;
    }
    fail(ErrorCode::ConfigError, std::string("field '") + key + "' is not a number");
}

SurfacePreset preset_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorCode::ConfigError, "preset entry must be an object");
    SurfacePreset p;
    p.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                         : std::string("custom");
    p.ell_a0 = number_field(j, "ell_a0", true);
    p.alpha0 = cplx(number_field(j, "alpha0_re", true), number_field(j, "alpha0_im", true));
    p.alpha2 = cplx(number_field(j, "alpha2_re", true), number_field(j, "alpha2_im", true));
    if (j.contains("C3_au") && !j["C3_au"].is_null()) p.c3_au = number_field(j, "C3_au", true);
    if (j.contains("C4_au") && !j["C4_au"].is_null()) p.c4_au = number_field(j, "C4_au", true);
    if (!(p.ell_a0 > 0.0)) fail(ErrorCode::ConfigError, "ell_a0 must be positive");
    return p;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

PotentialModel read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::TableParseError, "row 1: empty file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "z_m" || header[1] != "V_eV") {
        fail(ErrorCode::TableParseError, "row 1: expected header 'z_m,V_eV'");
    }
    std::vector<double> z, v;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        double zi, vi;
        if (cells.size() != 2 || !parse_double(cells[0], zi) || !parse_double(cells[1], vi)) {
            fail(ErrorCode::TableParseError,
                 "row " + std::to_string(row) + ": expected two numeric columns");
        }
        if (!z.empty() && !(zi > z.back())) {
            fail(ErrorCode::TableParseError,
                 "row " + std::to_string(row) + ": z must be strictly increasing");
        }
        z.push_back(zi);
        v.push_back(vi * constants::electron_volt);
    }
    return PotentialModel::tabulated(std::move(z), std::move(v));
}

PotentialModel load_table_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_table_csv(in);
}

std::vector<SurfacePreset> parse_presets_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigError, std::string("invalid JSON: ") + e.what());
    }
    const json* list = &j;
    if (j.is_object() && j.contains("presets")) list = &j["presets"];
    std::vector<SurfacePreset> out;
    if (list->is_array()) {
        for (const auto& e : *list) out.push_back(preset_from_json(e));
    } else {
        out.push_back(preset_from_json(*list));
    }
    if (out.empty()) fail(ErrorCode::ConfigError, "no presets in configuration");
    return out;
}

std::vector<SurfacePreset> load_presets_json(const std::string& path) {
    return parse_presets_json(read_all(path));
}

std::string coefficients_to_json(const EffectiveRangeCoefficients& c) {
    json j;
    j["source"] = c.source;
    j["ell_m"] = format_double(c.ell);
    j["alpha0_re"] = format_double(c.alpha0.real());
    j["alpha0_im"] = format_double(c.alpha0.imag());
    j["alpha2_re"] = format_double(c.alpha2.real());
    j["alpha2_im"] = format_double(c.alpha2.imag());
    j["window_lo_epsg"] = format_double(c.window_lo);
    j["window_hi_epsg"] = format_double(c.window_hi);
    j["k_window_max_per_m"] = format_double(c.k_window_max);
    j["residual"] = format_double(c.residual);
    j["samples"] = c.samples;
    return j.dump(2);
}

EffectiveRangeCoefficients coefficients_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigError, std::string("invalid JSON: ") + e.what());
    }
    EffectiveRangeCoefficients c;
    c.source = j.value("source", std::string());
    c.ell = number_field(j, "ell_m", true);
    c.alpha0 = cplx(number_field(j, "alpha0_re", true), number_field(j, "alpha0_im", true));
    c.alpha2 = cplx(number_field(j, "alpha2_re", true), number_field(j, "alpha2_im", true));
    c.window_lo = number_field(j, "window_lo_epsg", false);
    c.window_hi = number_field(j, "window_hi_epsg", false);
    c.k_window_max = number_field(j, "k_window_max_per_m", false);
    c.residual = number_field(j, "residual", false);
    c.samples = j.value("samples", 0);
    return c;
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_double(v);
                    } else if constexpr (!std::is_same_v<T, std::monostate>) {
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    json arr = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        obj[table.columns[i]] = nullptr;
                    } else if constexpr (std::is_same_v<T, double>) {
                        // JSON has no infinity; keep it readable as a string.
                        if (std::isfinite(v)) {
                            obj[table.columns[i]] = v;
                        } else {
                            obj[table.columns[i]] = format_double(v);
                        }
                    } else {
                        obj[table.columns[i]] = v;
                    }
                },
                row[i]);
        }
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

Table reflection_table(const ReflectionData& data) {
    Table t{{"k_per_m", "re_r", "im_r"}, {}};
    for (const auto& s : data.samples) t.rows.push_back({s.k, s.r.real(), s.r.imag()});
    return t;
}

Table resonance_table(const std::vector<ResonanceRecord>& records, const std::string& surface,
                      const EnergyUnit& unit) {
    const std::string& u = unit.suffix;
    Table t{{"n", "E_" + u, "reE_" + u, "imE_" + u, "lifetime_s", "method", "surface"}, {}};
    for (const auto& r : records) {
        std::vector<Cell> row{static_cast<long long>(r.n), r.E_real / unit.joule};
        if (r.E_complex) {
            row.push_back(r.E_complex->real() / unit.joule);
            row.push_back(r.E_complex->imag() / unit.joule);
        } else {
            row.push_back(std::monostate{});
            row.push_back(std::monostate{});
        }
        row.push_back(r.lifetime);
        row.push_back(std::string(resonance_method_name(r.method)));
        row.push_back(surface);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table response_table(const std::vector<ResponseSample>& samples, double eps_g,
                     const EnergyUnit& unit) {
    Table t{{"E_" + unit.suffix, "abs_f_sq"}, {}};
    for (const auto& s : samples) t.rows.push_back({s.E * eps_g / unit.joule, s.abs_f_sq});
    return t;
}

Table langer_table(const LangerMap& map) {
    const double ell_g = map.problem().setup.ell_g();
    Table t{{"z_m", "bold_z", "bold_F", "Q"}, {}};
    for (double y : map.grid_y()) {
        if (std::abs(y - map.y_t()) < 1e-12) continue;  // F = 0 there, Q undefined
        const LangerLocal l = map.local_scaled(y);
        t.rows.push_back(
            {y * ell_g, map.bold_z_scaled(y), l.bold_f, badlands_scaled(map.f(), y)});
    }
    return t;
}

void write_reflection_csv(std::ostream& out, const ReflectionData& data) {
    write_csv(out, reflection_table(data));
}

ReflectionData read_reflection_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "k_per_m,re_r,im_r") {
        fail(ErrorCode::TableParseError, "row 1: expected header 'k_per_m,re_r,im_r'");
    }
    ReflectionData data;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        double k, re, im;
        if (cells.size() != 3 || !parse_double(cells[0], k) || !parse_double(cells[1], re) ||
            !parse_double(cells[2], im)) {
            fail(ErrorCode::TableParseError,
                 "row " + std::to_string(row) + ": expected three numeric columns");
        }
        data.samples.push_back({k, cplx(re, im)});
    }
    return data;
}

void write_resonance_csv(std::ostream& out, const std::vector<ResonanceRecord>& records,
                         const std::string& surface, double eps_g) {
    write_csv(out, resonance_table(records, surface, {eps_g}));
}

void write_response_csv(std::ostream& out, const std::vector<ResponseSample>& samples) {
    write_csv(out, response_table(samples, 1.0, {1.0}));
}

void write_langer_csv(std::ostream& out, const LangerMap& map) {
    write_csv(out, langer_table(map));
}

}  // namespace qlev::io

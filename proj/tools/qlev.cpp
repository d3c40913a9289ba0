// Command-line front end: each subcommand writes one table (CSV or JSON) to
// --out or stdout. Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlev/airy.hpp"
#include "qlev/cavity.hpp"
#include "qlev/constants.hpp"
#include "qlev/effrange.hpp"
#include "qlev/error.hpp"
#include "qlev/io.hpp"
#include "qlev/liouville.hpp"
#include "qlev/potential.hpp"
#include "qlev/scatter.hpp"

namespace {

using namespace qlev;
using io::Cell;
using io::Table;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string preset;
    std::string config;
    std::string model;
    std::string table;
    std::optional<double> c3_au;
    double mass_amu = 0.0;
    double gravity = 0.0;
    int nmax = 10;
    std::vector<double> window;
    int samples = 0;
    std::string out;
    std::string format = "csv";
    std::string method = "both";
    bool fit = false;
    bool si = false;
    bool synthetic = false;
    double energy = 0.0;
    std::vector<int> peaks;
    std::string peaks_out;
    std::string records_out;
};

constexpr double kPeV = 1e-12 * constants::electron_volt;

struct Context {
    Options opt;
    PhysicalSetup setup;
    SurfacePreset surface;
    std::optional<PotentialModel> table_model;
    io::EnergyUnit unit{1.0};

    explicit Context(const Options& o) : opt(o), setup(make_setup(o)) {
        if (!o.table.empty()) {
            table_model = io::load_table_csv(o.table);
            surface.name = "table";
            surface.ell_a0 = cp_scales(setup, *table_model).ell / constants::bohr_radius;
        } else if (!o.config.empty()) {
            const auto presets = io::load_presets_json(o.config);
            surface = presets.front();
            if (!o.preset.empty()) {
                for (const auto& p : presets) {
                    if (p.name == o.preset) surface = p;
                }
            }
        } else {
            surface = find_preset(o.preset.empty() ? "perfect-mirror" : o.preset);
        }
        if (o.c3_au) surface.c3_au = *o.c3_au;
        unit = o.si ? io::EnergyUnit{kPeV, "peV"} : io::EnergyUnit{setup.eps_g()};
        if (o.nmax < 1) throw UsageError("--nmax must be at least 1");
        if (o.format != "csv" && o.format != "json") throw UsageError("--format is csv or json");
    }

    static PhysicalSetup make_setup(const Options& o) {
        const double m = o.mass_amu > 0.0 ? o.mass_amu * constants::atomic_mass_unit
                                           : constants::hydrogen_mass;
        const double g = o.gravity > 0.0 ? o.gravity : constants::standard_gravity;
        return PhysicalSetup(m, g);
    }

    std::pair<double, double> window(double lo, double hi) const {
        if (opt.window.empty()) return {lo, hi};
        if (opt.window.size() != 2 || !(opt.window[1] > opt.window[0]) || opt.window[0] < 0.0) {
            throw UsageError("--window needs two values lo < hi with lo >= 0");
        }
        return {opt.window[0], opt.window[1]};
    }

    PotentialModel model() const {
        if (table_model) return *table_model;
        const std::string m = opt.model.empty() ? "v4" : opt.model;
        if (m == "v4") return PotentialModel::homogeneous_v4(surface.c4(setup));
        if (m == "v3v4") {
            if (!surface.c3_au) throw UsageError("--model v3v4 needs --c3-au or C3_au in the config");
            return PotentialModel::v3v4(surface.c3(), surface.c4(setup));
        }
        if (m == "hard-wall") return PotentialModel::hard_wall();
        if (m == "table") throw UsageError("--model table needs --table <csv>");
        throw UsageError("unknown model '" + m + "'");
    }

    double model_ell(const PotentialModel& m) const {
        return m.kind() == PotentialKind::HardWall ? surface.ell() : cp_scales(setup, m).ell;
    }

    /// Effective-range coefficients: the preset values, or a fit to the
    /// numerical r(k) of the model when --fit or --table is given.
    EffectiveRangeCoefficients coefficients() const {
        if (!opt.fit && !table_model) return preset_coefficients(surface);
        const PotentialModel m = model();
        const int count = opt.samples > 0 ? opt.samples : 200;
        ReflectionData data = scan_reflection(setup, m, 0.0, 500.0, count);
        data.surface = surface.name;
        return fit_coefficients(setup, data, model_ell(m), 0.0, 500.0);
    }

    bool want(const char* method) const { return opt.method == "both" || opt.method == method; }

    void check_method(std::initializer_list<const char*> allowed) const {
        for (const char* a : allowed) {
            if (opt.method == a) return;
        }
        throw UsageError("unsupported --method '" + opt.method + "'");
    }

    double e_out(double joule) const { return joule / unit.joule; }
    std::string col(const std::string& name) const { return name + "_" + unit.suffix; }
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw qlev::Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool is_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
};

void emit(const Context& ctx, const Table& t, const std::string& path) {
    Output out(path);
    if (ctx.opt.format == "json") {
        io::write_json(out.stream(), t);
    } else {
        io::write_csv(out.stream(), t);
    }
}

Cell opt_cell(std::optional<double> v) { return v ? Cell(*v) : Cell(std::monostate{}); }

// ---------------------------------------------------------------------------

int cmd_ideal(const Context& ctx) {
    const auto levels = ideal_levels(ctx.setup, ctx.opt.nmax);
    std::vector<ResonanceRecord> records;
    for (int n = 1; n <= ctx.opt.nmax; ++n) {
        ResonanceRecord r;
        r.n = n;
        r.E_real = levels[n - 1];
        records.push_back(r);
    }
    std::vector<std::pair<int, int>> pairs;
    for (int n = 1; n <= ctx.opt.nmax; ++n) pairs.emplace_back(1, n);
    const auto omega = transition_frequencies(records, pairs);
    Table t{{"n", "lambda", "E_over_epsg", "E_peV", "omega_n1_rad_s"}, {}};
    for (int n = 1; n <= ctx.opt.nmax; ++n) {
        t.rows.push_back({static_cast<long long>(n), airy_zero(n),
                          levels[n - 1] / ctx.setup.eps_g(), levels[n - 1] / kPeV,
                          omega[n - 1]});
    }
    emit(ctx, t, ctx.opt.out);
    return 0;
}

int cmd_reflect(const Context& ctx) {
    const auto [lo, hi] = ctx.window(0.0, 500.0);
    const int count = ctx.opt.samples > 0 ? ctx.opt.samples : 200;
    ReflectionData data;
    double ell = ctx.surface.ell();
    if (ctx.opt.synthetic) {
        data = synthetic_reflection(ctx.setup, preset_coefficients(ctx.surface), lo, hi, count);
    } else {
        const PotentialModel m = ctx.model();
        data = scan_reflection(ctx.setup, m, lo, hi, count);
        ell = ctx.model_ell(m);
    }
    data.surface = ctx.surface.name;

    Output out(ctx.opt.out);
    if (ctx.opt.format == "json") {
        io::write_json(out.stream(), io::reflection_table(data));
    } else {
        io::write_reflection_csv(out.stream(), data);
    }
    if (ctx.opt.fit) {
        const auto c = fit_coefficients(ctx.setup, data, ell, lo, hi);
        const auto sl = scattering_length(c);
        auto j = nlohmann::json::parse(io::coefficients_to_json(c));
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.4f%+.4fi", c.alpha0.real(), c.alpha0.imag());
        j["alpha0_printed"] = buf;
        std::snprintf(buf, sizeof buf, "%.2f%+.2fi", c.alpha2.real(), c.alpha2.imag());
        j["alpha2_printed"] = buf;
        j["a_re_a0"] = sl.a.real() / constants::bohr_radius;
        j["a_im_a0"] = sl.a.imag() / constants::bohr_radius;
        j["b_a0"] = sl.b / constants::bohr_radius;
        (out.is_stdout() ? std::cerr : std::cout) << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_resonances(const Context& ctx) {
    ctx.check_method({"numeric", "effective-range", "both"});
    const int nmax = ctx.opt.nmax;
    const auto c = ctx.coefficients();
    const auto sl = scattering_length_levels(ctx.setup, scattering_length(c).a, nmax);
    std::vector<ResonanceRecord> num, ana, all;
    if (ctx.want("numeric")) num = resonances_numeric(ctx.setup, ctx.model(), nmax);
    if (ctx.want("effective-range")) ana = resonances_effective_range(ctx.setup, c, nmax);
    all.insert(all.end(), num.begin(), num.end());
    all.insert(all.end(), ana.begin(), ana.end());

    auto at = [](const std::vector<ResonanceRecord>& v, int n) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        return v[n - 1].E_real;
    };
    Table t{{"n", ctx.col("E0"), ctx.col("E_num"), ctx.col("E_ana"), ctx.col("reE1"),
             ctx.col("num_minus_E0"), ctx.col("ana_minus_E0"), ctx.col("num_minus_reE1"),
             ctx.col("ana_minus_reE1"), ctx.col("delta_E")},
            {}};
    for (int n = 1; n <= nmax; ++n) {
        const double e0 = airy_zero(n) * ctx.setup.eps_g();
        const double e1 = sl[n - 1].real();
        const auto en = at(num, n), ea = at(ana, n);
        auto diff = [&](std::optional<double> a, double b) -> std::optional<double> {
            if (!a) return std::nullopt;
            return ctx.e_out(*a - b);
        };
        std::optional<double> delta;
        if (en && ea) delta = ctx.e_out(*ea - *en);
        t.rows.push_back({static_cast<long long>(n), ctx.e_out(e0),
                          opt_cell(en ? std::optional(ctx.e_out(*en)) : std::nullopt),
                          opt_cell(ea ? std::optional(ctx.e_out(*ea)) : std::nullopt),
                          ctx.e_out(e1), opt_cell(diff(en, e0)), opt_cell(diff(ea, e0)),
                          opt_cell(diff(en, e1)), opt_cell(diff(ea, e1)), opt_cell(delta)});
    }
    emit(ctx, t, ctx.opt.out);
    if (!ctx.opt.records_out.empty()) {
        emit(ctx, io::resonance_table(all, ctx.surface.name, ctx.unit), ctx.opt.records_out);
    }
    return 0;
}

int cmd_poles(const Context& ctx) {
    ctx.check_method({"numeric", "effective-range", "both"});
    const int nmax = ctx.opt.nmax;
    const auto c = ctx.coefficients();
    const auto sl = scattering_length_levels(ctx.setup, scattering_length(c).a, nmax);
    std::vector<cplx> num, ana;
    if (ctx.want("numeric")) num = complex_poles(ctx.setup, ctx.model(), nmax);
    if (ctx.want("effective-range")) ana = complex_poles(ctx.setup, c, nmax);

    std::vector<ResonanceRecord> records;
    auto add = [&](const std::vector<cplx>& poles, ResonanceMethod m) {
        for (int n = 1; n <= static_cast<int>(poles.size()); ++n) {
            ResonanceRecord r;
            r.n = n;
            r.E_real = poles[n - 1].real();
            r.E_complex = poles[n - 1];
            r.method = m;
            r.lifetime = lifetime(r);
            records.push_back(r);
        }
    };
    add(num, ResonanceMethod::Numeric);
    add(ana, ResonanceMethod::EffectiveRange);

    Table t{{"n", ctx.col("reE1"), ctx.col("imE1"), ctx.col("reE_num"), ctx.col("imE_num"),
             ctx.col("reE_ana"), ctx.col("imE_ana"), ctx.col("re_num_minus_E1"),
             ctx.col("im_num_minus_E1"), ctx.col("re_ana_minus_E1"), ctx.col("im_ana_minus_E1"),
             ctx.col("re_delta"), ctx.col("im_delta"), "lifetime_num_s", "lifetime_ana_s"},
            {}};
    auto part = [&](const std::vector<cplx>& v, int n, bool imag,
                    cplx ref = 0.0) -> Cell {
        if (v.empty()) return std::monostate{};
        const cplx d = v[n - 1] - ref;
        return ctx.e_out(imag ? d.imag() : d.real());
    };
    auto tau = [&](const std::vector<cplx>& v, int n) -> Cell {
        if (v.empty()) return std::monostate{};
        return -constants::hbar / (2.0 * v[n - 1].imag());
    };
    for (int n = 1; n <= nmax; ++n) {
        const cplx e1 = sl[n - 1];
        Cell dre = std::monostate{}, dim = std::monostate{};
        if (!num.empty() && !ana.empty()) {
            dre = ctx.e_out((ana[n - 1] - num[n - 1]).real());
            dim = ctx.e_out((ana[n - 1] - num[n - 1]).imag());
        }
        t.rows.push_back({static_cast<long long>(n), ctx.e_out(e1.real()), ctx.e_out(e1.imag()),
                          part(num, n, false), part(num, n, true), part(ana, n, false),
                          part(ana, n, true), part(num, n, false, e1), part(num, n, true, e1),
                          part(ana, n, false, e1), part(ana, n, true, e1), dre, dim,
                          tau(num, n), tau(ana, n)});
    }
    emit(ctx, t, ctx.opt.out);
    if (!ctx.opt.records_out.empty()) {
        emit(ctx, io::resonance_table(records, ctx.surface.name, ctx.unit), ctx.opt.records_out);
    }
    return 0;
}

int cmd_scan(const Context& ctx) {
    ctx.check_method({"numeric", "effective-range", "both"});
    const bool numeric = ctx.opt.method == "numeric";
    const auto [lo, hi] = ctx.window(airy_zero(1) - 0.5, airy_zero(5) + 0.5);
    const int count = ctx.opt.samples > 0 ? ctx.opt.samples : 4001;
    const double eps = ctx.setup.eps_g();

    std::optional<PotentialModel> model;
    EffectiveRangeCoefficients c;
    if (numeric) {
        model = ctx.model();
    } else {
        c = ctx.coefficients();
    }
    std::function<cplx(double)> rho = [&](double e) {
        return numeric ? round_trip_factor(ctx.setup, *model, e * eps).rho
                       : rho_effective_range(ctx.setup, c, e);
    };
    const auto grid = response_scan(rho, lo, hi, count);
    emit(ctx, io::response_table(grid, eps, ctx.unit), ctx.opt.out);

    std::vector<std::pair<int, LorentzianPeak>> peaks;
    if (!ctx.opt.peaks.empty()) {
        const int top = *std::max_element(ctx.opt.peaks.begin(), ctx.opt.peaks.end());
        if (top < 1) throw UsageError("--peaks indices start at 1");
        const auto poles = numeric ? complex_poles(ctx.setup, *model, top)
                                   : complex_poles(ctx.setup, c, top);
        for (int n : ctx.opt.peaks) {
            if (n < 1) throw UsageError("--peaks indices start at 1");
            peaks.emplace_back(n, fit_peak_near(rho, poles[n - 1] / eps));
        }
    } else {
        for (const auto& p : fit_peaks(rho, grid)) {
            int best = 1;
            for (int n = 2; n <= 200 && airy_zero(n) < p.center + 2.0; ++n) {
                if (std::abs(airy_zero(n) - p.center) < std::abs(airy_zero(best) - p.center)) {
                    best = n;
                }
            }
            peaks.emplace_back(best, p);
        }
    }
    const double s = eps / ctx.unit.joule;
    Table t{{"n", ctx.col("E0"), ctx.col("center"), ctx.col("half_width"), "amplitude",
             "residual"},
            {}};
    for (const auto& [n, p] : peaks) {
        t.rows.push_back({static_cast<long long>(n), airy_zero(n) * s, p.center * s,
                          p.half_width * s, p.amplitude * s * s, p.residual});
    }
    if (ctx.opt.peaks_out.empty()) {
        io::write_csv(std::cerr, t);
    } else {
        emit(ctx, t, ctx.opt.peaks_out);
    }
    return 0;
}

int cmd_langer_dump(const Context& ctx) {
    const double e = ctx.opt.energy > 0.0 ? ctx.opt.energy : airy_zero(1);
    const LangerMap map(make_langer_problem(ctx.setup, ctx.model(), e * ctx.setup.eps_g()));
    emit(ctx, io::langer_table(map), ctx.opt.out);
    return 0;
}

void add_common(CLI::App* sub, Options& o) {
    auto* preset = sub->add_option("--preset", o.preset, "Surface preset name");
    auto* config = sub->add_option("--config", o.config, "JSON file with surface presets");
    auto* table = sub->add_option("--table", o.table, "Tabulated potential CSV (z_m,V_eV)");
    preset->excludes(table);
    config->excludes(table);
    sub->add_option("--model", o.model, "Numerical model: v4, v3v4, table or hard-wall");
    sub->add_option("--c3-au", o.c3_au, "C3 coefficient in atomic units for v3v4");
    sub->add_option("--mass-amu", o.mass_amu, "Atomic mass in u (default hydrogen)");
    sub->add_option("--gravity", o.gravity, "Gravitational acceleration in m/s^2");
    sub->add_option("--nmax", o.nmax, "Highest level index");
    sub->add_option("--out", o.out, "Output path (stdout when absent)");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_flag("--si", o.si, "Energies in peV instead of eps_g");
    sub->add_flag("--fit", o.fit, "Fit effective-range coefficients to the model r(k)");
    sub->add_option("--samples", o.samples, "Number of energy samples");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum levitation states above a mirror"};
    app.require_subcommand(1);
    Options o;

    auto* ideal = app.add_subcommand("ideal", "Ideal-bouncer levels");
    auto* reflect = app.add_subcommand("reflect", "Reflection amplitude r(k) on the CP tail");
    auto* resonances = app.add_subcommand("resonances", "Real resonance energies");
    auto* poles = app.add_subcommand("poles", "Complex poles and lifetimes");
    auto* scan = app.add_subcommand("scan", "|f(E)|^2 scan with Lorentzian peak fits");
    auto* langer = app.add_subcommand("langer-dump", "Langer coordinate grid");
    for (auto* sub : {ideal, reflect, resonances, poles, scan, langer}) add_common(sub, o);

    for (auto* sub : {reflect, scan}) {
        sub->add_option("--window", o.window, "Energy window lo hi in eps_g")->expected(2);
    }
    reflect->add_flag("--synthetic", o.synthetic, "Generate r(k) from the preset coefficients");
    for (auto* sub : {resonances, poles, scan}) {
        sub->add_option("--method", o.method, "numeric, effective-range or both");
    }
    for (auto* sub : {resonances, poles}) {
        sub->add_option("--records-out", o.records_out, "Resonance record table path");
    }
    scan->add_option("--peaks", o.peaks, "Level indices to fit");
    scan->add_option("--peaks-out", o.peaks_out, "Peak table path (stderr when absent)");
    langer->add_option("--energy", o.energy, "Energy in eps_g (default lambda_1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        const Context ctx(o);
        if (*ideal) return cmd_ideal(ctx);
        if (*reflect) return cmd_reflect(ctx);
        if (*resonances) return cmd_resonances(ctx);
        if (*poles) return cmd_poles(ctx);
        if (*scan) return cmd_scan(ctx);
        if (*langer) return cmd_langer_dump(ctx);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const qlev::Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::InvalidArgument:
            case ErrorCode::ConfigError:
            case ErrorCode::TableParseError:
            case ErrorCode::TableTooSparse:
                return 2;
            default:
                return 3;
        }
    }
    return 0;
}

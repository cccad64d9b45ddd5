#pragma once

// Run configuration, CSV/manifest output and the verification-suite driver used by the CLI.
//
// Config files are flat `key = value` text; `#` starts a comment.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fttsim/closedform.hpp"
#include "fttsim/solver.hpp"
#include "fttsim/verify.hpp"

namespace fttsim {

inline constexpr const char* kVersion = "0.1.0";

enum class SolverKind { fd, picard, closed_form };

inline const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::fd: return "fd";
        case SolverKind::picard: return "picard";
        case SolverKind::closed_form: return "closed_form";
    }
    return "?";
}

struct InitSpec {
    std::string kind = "plane_wave";  // plane_wave | gaussian | table
    double center = 0.0;
    double width = 0.5;
    std::string table_path;
};

struct RunConfig {
    double alpha = 1.0;
    double kappa = 0.0;
    std::string phase = "zero";
    InitSpec init;
    GridSpec grid;
    SolverKind solver = SolverKind::fd;
    int picard_max_iters = 20;
    double picard_fix_tol = 1e-10;
    std::string out = "out";

    DiffractionParams params() const { return {alpha, kappa, PhaseExpr::parse(phase), std::nullopt}; }

    /// Checks value ranges and the solver/parameter combinations.
    void validate() const {
        params().validate();
        grid.validate();
        if (solver == SolverKind::picard && alpha != 1.0) throw ConfigError("solver = picard requires alpha = 1");
        if (solver == SolverKind::closed_form && !PhaseExpr::parse(phase).is_zero())
            throw ConfigError("solver = closed_form requires phase 0");
        if (init.kind != "plane_wave" && init.kind != "gaussian" && init.kind != "table")
            throw ConfigError("init must be plane_wave, gaussian or table");
        if (init.kind == "table" && init.table_path.empty()) throw ConfigError("init = table needs init.table");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view v, std::string_view key) {
    v = trim(v);
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    return out;
}

inline int parse_int(std::string_view v, std::string_view key) {
    v = trim(v);
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config: '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

}  // namespace detail

inline SolverKind parse_solver(std::string_view s) {
    if (s == "fd") return SolverKind::fd;
    if (s == "picard") return SolverKind::picard;
    if (s == "closed_form") return SolverKind::closed_form;
    throw ConfigError("solver must be fd, picard or closed_form, got '" + std::string(s) + "'");
}

/// Applies one `key = value` setting.
inline void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
    using detail::parse_double;
    using detail::parse_int;
    value = detail::trim(value);
    if (key == "alpha") c.alpha = parse_double(value, key);
    else if (key == "kappa") c.kappa = parse_double(value, key);
    else if (key == "phase") c.phase = std::string(value);
    else if (key == "solver") c.solver = parse_solver(value);
    else if (key == "init") c.init.kind = std::string(value);
    else if (key == "init.center") c.init.center = parse_double(value, key);
    else if (key == "init.width") c.init.width = parse_double(value, key);
    else if (key == "init.table") c.init.table_path = std::string(value);
    else if (key == "x_min") c.grid.x_min = parse_double(value, key);
    else if (key == "x_max") c.grid.x_max = parse_double(value, key);
    else if (key == "nx") c.grid.nx = parse_int(value, key);
    else if (key == "t_max") c.grid.t_max = parse_double(value, key);
    else if (key == "nt") c.grid.nt = parse_int(value, key);
    else if (key == "picard.max_iters") c.picard_max_iters = parse_int(value, key);
    else if (key == "picard.fix_tol") c.picard_fix_tol = parse_double(value, key);
    else if (key == "out") c.out = std::string(value);
    else throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = detail::trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = detail::trim(v.substr(0, eq));
        try {
            apply_setting(base, key, v.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IOError("error reading '" + path.string() + "'");
    return ss.str();
}

inline RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

/// Table file: CSV with header `x,re_e0,im_e0,re_eh,im_eh`.
inline InitialProfile load_table_profile(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    std::vector<double> xs;
    std::vector<Complex> e0, eh;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        double v[5];
        std::string_view rest = line;
        for (int k = 0; k < 5; ++k) {
            const auto comma = rest.find(',');
            v[k] = detail::parse_double(rest.substr(0, comma), "init.table");
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            if (k < 4 && comma == std::string_view::npos) throw ConfigError("init.table: expected 5 columns");
        }
        xs.push_back(v[0]);
        e0.emplace_back(v[1], v[2]);
        eh.emplace_back(v[3], v[4]);
    }
    return InitialProfile::table(std::move(xs), std::move(e0), std::move(eh));
}

inline InitialProfile make_profile(const InitSpec& s) {
    if (s.kind == "plane_wave") return InitialProfile::plane_wave();
    if (s.kind == "gaussian") return InitialProfile::gaussian(s.center, s.width);
    if (s.kind == "table") return load_table_profile(s.table_path);
    throw ConfigError("unknown init kind '" + s.kind + "'");
}

/// Writes `data` to `path` through a temporary file in the same directory and a rename.
inline void write_atomic(const std::filesystem::path& path, std::string_view data) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IOError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IOError("cannot write '" + tmp.string() + "'");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) throw IOError("error writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IOError("cannot move output into place at '" + path.string() + "'");
    }
}

inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV `x,t,re_e0,im_e0,re_eh,im_eh`, rows ordered by t then x.
inline std::string field_to_csv(const FieldGrid& g) {
    const auto& s = g.spec();
    std::string out = "x,t,re_e0,im_e0,re_eh,im_eh\n";
    out.reserve(out.size() + static_cast<std::size_t>(s.nt + 1) * (s.nx + 1) * 130);
    char buf[160];
    for (int n = 0; n <= s.nt; ++n)
        for (int i = 0; i <= s.nx; ++i) {
            const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.x(i), s.t(n),
                                          g.e0(n, i).real(), g.e0(n, i).imag(), g.eh(n, i).real(), g.eh(n, i).imag());
            out.append(buf, static_cast<std::size_t>(len));
        }
    return out;
}

/// 64-bit FNV-1a hash, hex encoded.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct FieldMetrics {
    double max_abs_e0 = 0.0;
    double max_abs_eh = 0.0;
    double intensity_deviation = 0.0;  // max | |E0|^2 + |Eh|^2 - 1 |
};

inline FieldMetrics field_metrics(const FieldGrid& g) {
    FieldMetrics m;
    const auto& s = g.spec();
    for (int n = 0; n <= s.nt; ++n)
        for (int i = 0; i <= s.nx; ++i) {
            m.max_abs_e0 = std::max(m.max_abs_e0, std::abs(g.e0(n, i)));
            m.max_abs_eh = std::max(m.max_abs_eh, std::abs(g.eh(n, i)));
            m.intensity_deviation =
                std::max(m.intensity_deviation, std::abs(std::norm(g.e0(n, i)) + std::norm(g.eh(n, i)) - 1.0));
        }
    return m;
}

/// Solves the configured problem on the configured grid.
inline FieldGrid compute_field(const RunConfig& c) {
    c.validate();
    const auto params = c.params();
    const auto init = make_profile(c.init);
    switch (c.solver) {
        case SolverKind::fd: return solve_fd(params, init, c.grid);
        case SolverKind::picard:
            return solve_picard_classical(params, init, c.grid, c.picard_max_iters, c.picard_fix_tol);
        case SolverKind::closed_form: {
            FieldGrid g(c.grid);
            for (int n = 0; n <= c.grid.nt; ++n) {
                const double t = c.grid.t(n);
                const bool pw = init.kind() == InitialProfile::Kind::plane_wave;
                const auto p = pw ? pendellosung(params, t) : FieldValue{};
                for (int i = 0; i <= c.grid.nx; ++i) {
                    const auto v = pw ? p : free_space_solution(params, init, c.grid.x(i), t);
                    g.e0(n, i) = n == 0 ? init.e0(c.grid.x(i)) : v.e0;
                    g.eh(n, i) = n == 0 ? init.eh(c.grid.x(i)) : v.eh;
                }
            }
            g.check_finite();
            return g;
        }
    }
    throw ConfigError("unknown solver");
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    return {{"alpha", c.alpha},
            {"kappa", c.kappa},
            {"phase", c.phase},
            {"solver", to_string(c.solver)},
            {"init",
             {{"kind", c.init.kind}, {"center", c.init.center}, {"width", c.init.width}, {"table", c.init.table_path}}},
            {"grid",
             {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"nx", c.grid.nx}, {"t_max", c.grid.t_max},
              {"nt", c.grid.nt}}},
            {"picard", {{"max_iters", c.picard_max_iters}, {"fix_tol", c.picard_fix_tol}}},
            {"out", c.out}};
}

struct RunResult {
    FieldGrid field;
    nlohmann::json manifest;
    std::filesystem::path csv_path;
    std::filesystem::path manifest_path;
};

/// Runs a configuration and writes `field.csv` and `manifest.json` into `c.out`.
/// The manifest is written last, so its presence marks a completed run.
inline RunResult run(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    RunResult r;
    r.field = compute_field(c);
    const std::string csv = field_to_csv(r.field);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto m = field_metrics(r.field);
    nlohmann::json metrics = {{"max_abs_e0", m.max_abs_e0},
                              {"max_abs_eh", m.max_abs_eh},
                              {"intensity_deviation", m.intensity_deviation}};
    const auto params = c.params();
    if (params.phase.is_zero() && c.init.kind == "plane_wave")
        metrics["pendellosung_gap"] = pendellosung_error(r.field, params);

    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

    r.manifest = {{"tool", "fttsim"},
                  {"version", kVersion},
                  {"config", config_to_json(c)},
                  {"finished_utc", stamp},
                  {"runtime_seconds", runtime},
                  {"grid_hash", "fnv1a64:" + fnv1a_hex(csv)},
                  {"rows", (c.grid.nt + 1) * (c.grid.nx + 1)},
                  {"metrics", metrics}};

    const std::filesystem::path dir = c.out;
    r.csv_path = dir / "field.csv";
    r.manifest_path = dir / "manifest.json";
    write_atomic(r.csv_path, csv);
    write_atomic(r.manifest_path, r.manifest.dump(2) + "\n");
    return r;
}

// ---------------------------------------------------------------------------
// verification suite

struct CheckRow {
    std::string group;
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyReport {
    std::vector<CheckRow> rows;
    bool all_passed() const {
        return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.passed; });
    }
};

inline const std::vector<std::string>& verify_groups() {
    static const std::vector<std::string> groups{"identities",   "table_integral", "stankovic",
                                                 "kernel_means", "kernel_point",   "limits"};
    return groups;
}

namespace detail {

// Largest Re(s) over the poles s^rho = z on the principal sheet; E_{rho,mu}(z) grows like e^{Re s}.
inline double mittag_leffler_growth(double rho, Complex z) {
    const double r = std::pow(std::abs(z), 1.0 / rho);
    const double th = std::arg(z);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = -static_cast<int>(std::ceil(1.0 / rho)) - 1; k <= static_cast<int>(std::ceil(1.0 / rho)) + 1; ++k) {
        const double ang = (th + 2.0 * std::numbers::pi * k) / rho;
        if (std::abs(th + 2.0 * std::numbers::pi * k) < rho * std::numbers::pi) best = std::max(best, r * std::cos(ang));
    }
    return best;
}

inline std::string fmt(const char* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

inline std::string fmt(const char* f, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

}  // namespace detail

/// Maximum over t in [0, 10] (101 samples) of the cos/sin degeneration errors.
inline double mittag_leffler_trig_error(int samples = 101) {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = 10.0 * k / (samples - 1);
        worst = std::max(worst, std::abs(mittag_leffler(2.0, 1.0, -t * t) - std::cos(t)));
        worst = std::max(worst, std::abs(t * mittag_leffler(2.0, 2.0, -t * t) - std::sin(t)));
    }
    return worst;
}

/// Largest relative recurrence residual over `draws` random (rho, mu, z), rho in [0.2, 2],
/// mu in [0.5, 3], |z| <= 10. Draws whose value would exceed ~e^600 are redrawn.
inline double mittag_leffler_recurrence_sweep(int draws = 100, std::uint64_t seed = 20240501) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < draws;) {
        const double rho = 0.2 + 1.8 * u01(rng);
        const double mu = 0.5 + 2.5 * u01(rng);
        const double r = 10.0 * std::sqrt(u01(rng));
        const double th = 2.0 * std::numbers::pi * u01(rng);
        const Complex z = std::polar(r, th);
        if (detail::mittag_leffler_growth(rho, z) > 600.0) continue;
        const Complex e = mittag_leffler(rho, mu, z);
        worst = std::max(worst, mlf_identity_check(rho, mu, z) / (1.0 + std::abs(e)));
        ++k;
    }
    return worst;
}

/// Runs the selected groups of checks. Every tolerance is multiplied by `tol_scale`;
/// a check passes iff its value is within a strictly positive tolerance.
inline VerifyReport verify_suite(const std::vector<std::string>& selection, double tol_scale = 1.0) {
    for (const auto& s : selection)
        if (std::find(verify_groups().begin(), verify_groups().end(), s) == verify_groups().end())
            throw ConfigError("verify: unknown check group '" + s + "'");
    if (!(tol_scale >= 0.0) || !std::isfinite(tol_scale)) throw ConfigError("verify: tol-scale must be >= 0");
    const std::set<std::string> sel(selection.begin(), selection.end());
    VerifyReport rep;
    auto add = [&](const std::string& group, const std::string& name, double value, double tol) {
        const double t = tol * tol_scale;
        rep.rows.push_back({group, name, value, t, t > 0.0 && value <= t});
    };

    if (sel.count("identities")) {
        add("identities", "E_{2,1}(-t^2)=cos t, t E_{2,2}(-t^2)=sin t, t in [0,10]", mittag_leffler_trig_error(), 1e-9);
        add("identities", "E_{r,m}(z) - 1/G(m) - z E_{r,m+r}(z), 100 draws (rel)", mittag_leffler_recurrence_sweep(),
            1e-8);
        add("identities", "E_{2,1}(-1) recurrence", mlf_identity_check(2.0, 1.0, -1.0), 1e-10);
        double coeff = 0.0;
        for (double a : {0.5, 0.8, 1.0, 1.6})
            for (double beta : {1.0, 1.5, 2.0})
                for (double mu : {0.3, 0.7, 1.0})
                    coeff = std::max(coeff, mlf_derivative_identity_check(a, beta, mu, Complex(-1.3, 0.4)));
        add("identities", "RL derivative of t^{b-1}E_{a,b}(lt^a), coefficientwise", coeff, 1e-12);
    }
    if (sel.count("table_integral")) {
        for (Complex s : {Complex(1.0, 0.0), Complex(-1.0, 0.05)})
            for (double tau : {0.5, 2.0, std::numbers::pi})
                add("table_integral", detail::fmt("sigma=%g%+gi", s.real(), s.imag()) + detail::fmt(" tau=%.4g", tau),
                    table_integral_check(s, tau), 1e-8);
    }
    if (sel.count("stankovic")) {
        for (double a : {0.5, 0.7, 0.9, 1.0})
            for (double t : {0.5, 1.0, 2.0})
                add("stankovic", detail::fmt("alpha=%g t=%g sigma=-1", a, t), stankovic_check(a, -1.0, t), 1e-6);
    }
    if (sel.count("kernel_means")) {
        const auto lin = wright_mean_limits([](double s) { return s; }, 0.99);
        add("kernel_means", "g=s, beta=0.99: first integral vs g(1)=1", std::abs(lin.first - 1.0), 0.05);
        add("kernel_means", "g=s, beta=0.99: second integral vs int_0^1 g=0.5", std::abs(lin.second - 0.5), 0.05);
        // exact values from the Mellin moments int s^{k-1} phi(-b, m; -s) ds = Gamma(k)/Gamma(m + b k)
        double mellin = 0.0;
        for (double b : {0.3, 0.5, 0.7, 0.9}) {
            const auto one = wright_mean_limits([](double) { return 1.0; }, b);
            mellin = std::max(mellin, std::abs(one.second - recip_gamma(2.0 * b)));
            mellin = std::max(mellin, std::abs(one.first - recip_gamma(b)));
        }
        add("kernel_means", "g=1: moments 1/G(b), 1/G(2b), b in {.3,.5,.7,.9}", mellin, 1e-8);
        std::vector<double> gaps;
        for (double b : {0.9, 0.95, 0.99}) gaps.push_back(std::abs(wright_mean_limits([](double s) { return s * s; }, b).first - 1.0));
        add("kernel_means", "g=s^2: rise of |I - g(1)| along beta=.9,.95,.99", max_increase(gaps), 1e-4);
    }
    if (sel.count("kernel_point")) {
        double norm = 0.0;
        for (double b : {0.3, 0.5, 0.7, 0.9, 0.99})
            norm = std::max(norm, std::abs(wright_point_limit([](double) { return 1.0; }, b) - 1.0));
        add("kernel_point", "g=1: normalisation, beta in {.3,.5,.7,.9,.99}", norm, 1e-8);
        add("kernel_point", "g=s, beta=0.99: vs g(1)=1",
            std::abs(wright_point_limit([](double s) { return s; }, 0.99) - 1.0), 0.05);
        std::vector<double> gaps;
        for (double b : {0.9, 0.95, 0.99})
            gaps.push_back(std::abs(wright_point_limit([](double s) { return std::exp(-s); }, b) - std::exp(-1.0)));
        add("kernel_point", "g=exp(-s): rise of |I - 1/e| along beta=.9,.95,.99", max_increase(gaps), 1e-4);
    }
    if (sel.count("limits")) {
        const auto seq = green_limit_sequence(0.3, 1.0, 1.0, {0.9, 0.95, 0.99});
        std::vector<double> g, rl;
        for (const auto& s : seq) {
            g.push_back(s.gap_green);
            rl.push_back(s.gap_rl);
        }
        add("limits", "G_a: rise of |G_a - G| along alpha=.9,.95,.99", max_increase(g), 1e-12);
        add("limits", "G_a: |G_a - G| at alpha=0.99, (x,t)=(0.3,1)", g.back(), 5e-3);
        add("limits", "D^{a-1}G_a: rise of |D^{a-1}G_a - G| along alpha=.9,.95,.99", max_increase(rl), 1e-12);
        add("limits", "D^{a-1}G_a: |D^{a-1}G_a - G| at alpha=0.99, (x,t)=(0.3,1)", rl.back(), 5e-3);
    }
    return rep;
}

}  // namespace fttsim

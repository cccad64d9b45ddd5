// fttsim: command-line front end.
//
//   fttsim run --config FILE [--alpha A] [--kappa K] [--phase EXPR] [--solver S] [--out DIR]
//   fttsim verify [--only LIST] [--tol-scale X]
//   fttsim pendellosung --alpha A --t-max T --steps N [--kappa K]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fttsim/io.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numeric_error = 2, io_error = 3 };

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_run(const std::string& config_path, const std::optional<double>& alpha, const std::optional<double>& kappa,
            const std::optional<std::string>& phase, const std::optional<std::string>& solver,
            const std::optional<std::string>& out) {
    auto cfg = fttsim::load_config(config_path);
    if (alpha) cfg.alpha = *alpha;
    if (kappa) cfg.kappa = *kappa;
    if (phase) cfg.phase = *phase;
    if (solver) cfg.solver = fttsim::parse_solver(*solver);
    if (out) cfg.out = *out;
    const auto result = fttsim::run(cfg);
    const auto& m = result.manifest["metrics"];
    std::printf("wrote %s (%d x %d)\n", result.csv_path.string().c_str(), cfg.grid.nt + 1, cfg.grid.nx + 1);
    std::printf("wrote %s\n", result.manifest_path.string().c_str());
    std::printf("max|E0| = %.6g  max|Eh| = %.6g  runtime %.3fs\n", m["max_abs_e0"].get<double>(),
                m["max_abs_eh"].get<double>(), result.manifest["runtime_seconds"].get<double>());
    return ok;
}

int cmd_verify(const std::optional<std::string>& only, double tol_scale) {
    const auto selection = only ? split_list(*only) : fttsim::verify_groups();
    const auto report = fttsim::verify_suite(selection, tol_scale);
    for (const auto& r : report.rows)
        std::printf("%-4s  %-14s  %-64s  %10.3e  (tol %.1e)\n", r.passed ? "ok" : "FAIL", r.group.c_str(),
                    r.name.c_str(), r.value, r.tolerance);
    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += !r.passed;
    std::printf("%zu checks, %zu failed\n", report.rows.size(), failed);
    return report.all_passed() ? ok : numeric_error;
}

int cmd_pendellosung(double alpha, double kappa, double t_max, int steps) {
    if (steps < 1) throw fttsim::ConfigError("--steps must be positive");
    if (!(t_max > 0.0)) throw fttsim::ConfigError("--t-max must be positive");
    const fttsim::DiffractionParams p{alpha, kappa, fttsim::PhaseExpr(), std::nullopt};
    p.validate();
    std::printf("t,re_e0,im_e0,re_eh,im_eh\n");
    for (int n = 0; n <= steps; ++n) {
        const double t = t_max * n / steps;
        const auto v = fttsim::pendellosung(p, t);
        std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", t, v.e0.real(), v.e0.imag(), v.eh.real(), v.eh.imag());
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Takagi-Taupin simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fttsim::kVersion);

    auto* run = app.add_subcommand("run", "solve a configured problem and write field.csv + manifest.json");
    std::string config_path;
    std::optional<double> alpha, kappa;
    std::optional<std::string> phase, solver, out;
    run->add_option("--config", config_path, "key = value configuration file")->required();
    run->add_option("--alpha", alpha, "fractional order in (0, 1]");
    run->add_option("--kappa", kappa, "absorption, sigma = -1 + i kappa");
    run->add_option("--phase", phase, "key function f(x, t) or preset");
    run->add_option("--solver", solver, "fd | picard | closed_form");
    run->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "run the numerical identity and limit checks");
    std::optional<std::string> only;
    double tol_scale = 1.0;
    verify->add_option("--only", only, "comma-separated subset of: identities,table_integral,stankovic,kernel_means,kernel_point,limits");
    verify->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");

    auto* pend = app.add_subcommand("pendellosung", "print the plane-wave closed form as CSV");
    double p_alpha = 1.0, p_kappa = 0.0, p_tmax = 1.0;
    int p_steps = 10;
    pend->add_option("--alpha", p_alpha, "fractional order in (0, 1]")->required();
    pend->add_option("--t-max", p_tmax, "final depth")->required();
    pend->add_option("--steps", p_steps, "number of intervals")->required();
    pend->add_option("--kappa", p_kappa, "absorption");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*run) return cmd_run(config_path, alpha, kappa, phase, solver, out);
        if (*verify) return cmd_verify(only, tol_scale);
        if (*pend) return cmd_pendellosung(p_alpha, p_kappa, p_tmax, p_steps);
    } catch (const fttsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return config_error;
    } catch (const fttsim::NumericError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return numeric_error;
    } catch (const fttsim::IOError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return io_error;
    }
    return ok;
}

// gsdecay: ground-state decay verification for Schrodinger operators with
// confining potentials. Subcommands: solve | envelope | kernel-checks | report.
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 check failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "gsdecay/config.hpp"
#include "gsdecay/errors.hpp"
#include "gsdecay/feynman_kac.hpp"
#include "gsdecay/kernels.hpp"
#include "gsdecay/spectral.hpp"
#include "gsdecay/verify.hpp"

namespace {

namespace fs = std::filesystem;
using gsd::config::RunConfig;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = gsd::config::parse_config_file(args.config_path);
    if (const char* env = std::getenv("GSDECAY_OUT"); env && *env) cfg.output_dir = env;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed_set) cfg.fk_cfg.seed = args.seed;
    return cfg;
}

std::vector<std::string> file_header(const RunConfig& cfg) {
    return {std::string("gsdecay ") + gsd::config::kVersion,
            "config=" + gsd::config::hash_hex(cfg.hash)};
}

std::string out_prefix(const RunConfig& cfg) {
    return cfg.potential.id() + "_" + gsd::config::hash_hex(cfg.hash).substr(8);
}

gsd::spectral::GroundState solve_from_config(const RunConfig& cfg) {
    gsd::spectral::GridSpec grid = cfg.grid;
    grid.radial =
        cfg.prefer_radial && cfg.potential.radial && cfg.potential.radial_nondecreasing();
    if (!cfg.potential.confining)
        throw gsd::ConfigError("potential: not confining; the solve path requires decay");
    if (grid.radial)
        return gsd::spectral::solve_radial_ground_state(cfg.potential, grid, cfg.solver_tol);
    if (grid.dimension >= 2 && grid.points_per_axis % 2 == 0)
        throw gsd::ConfigError("grid.points_per_axis: must be odd in d >= 2");
    return gsd::spectral::solve_ground_state(grid, cfg.potential, cfg.solver_tol);
}

int run_solve(const CommonArgs& args) {
    RunConfig cfg = load(args);
    gsd::spectral::GroundState gs = solve_from_config(cfg);
    fs::create_directories(cfg.output_dir);
    const std::string path =
        (fs::path(cfg.output_dir) / (out_prefix(cfg) + "_ground_state.csv")).string();
    gsd::spectral::write_ground_state_csv(gs, path, file_header(cfg));
    if (!args.quiet) {
        std::printf("potential %s: lambda0=%.10g residual=%.3e gap=%.6g\n",
                    cfg.potential.id().c_str(), gs.lambda0, gs.residual, gs.spectral_gap);
        for (const auto& w : gs.warnings) std::printf("warning: %s\n", w.c_str());
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int run_envelope(const CommonArgs& args) {
    RunConfig cfg = load(args);
    gsd::verify::VerificationReport report =
        gsd::verify::run_verification(cfg.potential, cfg.verify_options());
    gsd::verify::write_report_files(report, cfg.output_dir, out_prefix(cfg), file_header(cfg));
    if (!args.quiet) {
        std::fputs(report.to_text().c_str(), stdout);
        std::printf("wrote report under %s/%s_*\n", cfg.output_dir.c_str(),
                    out_prefix(cfg).c_str());
    }
    return report.pass ? 0 : 4;
}

int run_kernel_checks(const CommonArgs& args) {
    RunConfig cfg = load(args);
    fs::create_directories(cfg.output_dir);
    const auto header = file_header(cfg);
    const std::string prefix = out_prefix(cfg);
    bool all_pass = true;
    std::ofstream summary(fs::path(cfg.output_dir) / (prefix + "_checks.txt"));
    for (const auto& line : header) summary << "# " << line << "\n";
    char buf[512];
    const auto emit = [&](const char* fmt, auto... vals) {
        std::snprintf(buf, sizeof buf, fmt, vals...);
        summary << buf << "\n";
        if (!args.quiet) std::printf("%s\n", buf);
    };

    if (cfg.checks.resolvent) {
        // resolvent-check: closed forms in d = 1 and d = 3, the half-generator
        // relation, and the lower-bound witness in the potential's dimension.
        bool ok = true;
        for (double lambda : cfg.resolvent_lambda_grid) {
            const double s = std::sqrt(lambda);
            for (double y : {0.5, 1.0, 2.0}) {
                const double r1 = gsd::kernels::resolvent_kernel(lambda, y, 1);
                ok = ok && std::abs(r1 - std::exp(-s * y) / (2.0 * s)) <= 1e-12 * r1;
                const double r3 = gsd::kernels::resolvent_kernel(lambda, y, 3);
                const double c3 = std::exp(-s * y) / (4.0 * M_PI * y);
                ok = ok && std::abs(r3 - c3) <= 1e-8 * c3;
                for (int d = 1; d <= 3; ++d) {
                    const double lhs =
                        gsd::kernels::resolvent_kernel_half_laplacian(lambda, y, d);
                    const double rhs = 2.0 * gsd::kernels::resolvent_kernel(2.0 * lambda, y, d);
                    ok = ok && std::abs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs);
                }
            }
        }
        const int dw = std::min(3, cfg.potential.dimension);
        const auto witness = gsd::kernels::resolvent_lower_bound_witness(
            cfg.resolvent_epsilon, dw, cfg.resolvent_lambda_grid.back(), cfg.resolvent_y_max);
        ok = ok && witness.c > 0.0;
        emit("resolvent-check pass=%d witness_rho=%.6g witness_c=%.6g", ok ? 1 : 0,
             witness.rho, witness.c);
        all_pass = all_pass && ok;
    }

    if (cfg.checks.dirichlet_bound && cfg.potential.dimension == 1) {
        // Fit the structural constant against the exact interval kernel.
        const double mu0 = gsd::kernels::principal_dirichlet_eigenvalue(1);
        double fitted = 1.0;
        for (double t : cfg.dirichlet_t_grid)
            for (double x : cfg.dirichlet_points)
                for (double y : cfg.dirichlet_points) {
                    gsd::kernels::DirichletBallBoundQuery q{t, {x}, {y}, 1.0, mu0, 1.0};
                    const double bound = gsd::kernels::dirichlet_ball_lower_bound(q);
                    const double exact = gsd::kernels::dirichlet_interval_kernel(t, x, y);
                    fitted = std::min(fitted, exact / bound);
                }
        const bool ok = fitted >= cfg.dirichlet_min_c;
        emit("dirichlet-bound pass=%d fitted_c=%.6g min_c=%.6g", ok ? 1 : 0, fitted,
             cfg.dirichlet_min_c);
        all_pass = all_pass && ok;
    }

    if (cfg.checks.exit_time) {
        bool ok = true;
        for (double lambda : cfg.exit_lambda_grid)
            for (double r : cfg.exit_r_grid) {
                const auto est = gsd::fk::exit_time_laplace(lambda, r, 1, cfg.fk_cfg);
                const double closed = 1.0 / std::cosh(r * std::sqrt(lambda));
                const double tol = std::max(3.0 * est.stderr_, 0.02 * closed);
                const bool point_ok =
                    est.bias_converged && std::abs(est.mean - closed) <= tol &&
                    est.mean <= 2.0 * std::exp(-0.9 * std::sqrt(lambda) * r) + 3.0 * est.stderr_;
                emit("exit-time lambda=%g r=%g estimate=%.6g stderr=%.2e closed=%.6g "
                     "bias_converged=%d pass=%d",
                     lambda, r, est.mean, est.stderr_, closed, est.bias_converged ? 1 : 0,
                     point_ok ? 1 : 0);
                ok = ok && point_ok;
            }
        all_pass = all_pass && ok;
    }

    if (cfg.checks.sandwich) {
        std::vector<gsd::fk::SandwichSample> plan = cfg.fk_plan;
        if (plan.empty()) {
            for (double x : {3.0, 4.0})
                for (double t : {0.1, 0.5, 1.0}) {
                    gsd::fk::SandwichSample s;
                    s.x.assign(cfg.potential.dimension, 0.0);
                    s.y.assign(cfg.potential.dimension, 0.0);
                    s.x[0] = x;
                    s.t = t;
                    plan.push_back(std::move(s));
                }
        }
        const auto lower = gsd::fk::check_lower_sandwich(cfg.potential, cfg.fk_epsilon,
                                                         cfg.fk_delta, plan, cfg.fk_cfg);
        gsd::fk::write_sandwich_csv(
            lower, (fs::path(cfg.output_dir) / (prefix + "_sandwich_lower.csv")).string(),
            header);
        emit("sandwich-lower pass=%d fitted_c1=%.6g stderr=%.2e rejected=%zu violations=%zu",
             lower.pass ? 1 : 0, lower.fitted_constant, lower.fitted_stderr,
             lower.rejected.size(), lower.violations.size());
        const auto upper = gsd::fk::check_upper_sandwich(cfg.potential, cfg.fk_epsilon,
                                                         cfg.fk_delta, plan, cfg.fk_cfg);
        gsd::fk::write_sandwich_csv(
            upper, (fs::path(cfg.output_dir) / (prefix + "_sandwich_upper.csv")).string(),
            header);
        emit("sandwich-upper pass=%d fitted_c=%.6g stderr=%.2e rejected=%zu violations=%zu",
             upper.pass ? 1 : 0, upper.fitted_constant, upper.fitted_stderr,
             upper.rejected.size(), upper.violations.size());
        all_pass = all_pass && lower.pass && upper.pass;
    }

    emit("kernel-checks pass=%d", all_pass ? 1 : 0);
    return all_pass ? 0 : 4;
}

int run_report(const CommonArgs& args) {
    const int rc_solve = run_solve(args);
    const int rc_env = run_envelope(args);
    const int rc_kernel = run_kernel_checks(args);
    if (rc_solve != 0) return rc_solve;
    if (rc_env != 0) return rc_env;
    return rc_kernel;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground-state decay verification for -Laplacian + V"};
    app.require_subcommand(1);
    CommonArgs args;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON run configuration")->required();
        sub->add_option("--out", args.out_dir, "output directory (overrides config and env)");
        sub->add_option("--seed", args.seed, "Monte Carlo seed override")
            ->each([&](const std::string&) { args.seed_set = true; });
        sub->add_flag("--quiet", args.quiet, "suppress progress output");
    };
    CLI::App* solve = app.add_subcommand("solve", "compute the ground state, emit CSV");
    CLI::App* envelope =
        app.add_subcommand("envelope", "fit decay envelopes and write a report");
    CLI::App* kernel_checks = app.add_subcommand(
        "kernel-checks", "resolvent, Dirichlet-bound, exit-time and sandwich checks");
    CLI::App* report = app.add_subcommand("report", "solve + envelope + kernel-checks");
    for (auto* sub : {solve, envelope, kernel_checks, report}) add_common(sub);

    CLI11_PARSE(app, argc, argv);
    try {
        if (solve->parsed()) return run_solve(args);
        if (envelope->parsed()) return run_envelope(args);
        if (kernel_checks->parsed()) return run_kernel_checks(args);
        return run_report(args);
    } catch (const gsd::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const gsd::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

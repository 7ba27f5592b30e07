// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Run all via `ctest` or a single one via
// `./acceptance -tc='criterion_3*'`.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsdecay/feynman_kac.hpp"
#include "gsdecay/kernels.hpp"
#include "gsdecay/potentials.hpp"
#include "gsdecay/spectral.hpp"
#include "gsdecay/verify.hpp"
#include "oracles.hpp"

using namespace gsd;
using potentials::make_affine_power;
using potentials::make_log;
using potentials::make_power;
using spectral::GridSpec;
using spectral::solve_ground_state;
using spectral::solve_radial_ground_state;

namespace {

void report_line(int criterion, bool pass, const std::string& detail) {
    std::printf("ACCEPTANCE %2d %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct SuiteEntry {
    potentials::PotentialSpec potential;
    GridSpec grid;
    bool radial;
};

}  // namespace

TEST_CASE("criterion_1_harmonic_oracle") {
    const double t0 = now_seconds();
    const GridSpec grid{1, 10.0, 2000, false};
    const auto gs = solve_ground_state(grid, make_power(1.0, 1), 1e-10);
    const double elapsed = now_seconds() - t0;
    const double lambda_err = std::abs(gs.lambda0 - 1.0);
    double sup = 0.0;
    for (int i = 0; i < grid.points_per_axis; ++i) {
        const double x = grid.coord(i);
        if (std::abs(x) > 5.0) continue;
        const double closed = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
        sup = std::max(sup, std::abs(gs.phi0[i] - closed));
    }
    const bool pass = lambda_err <= 1e-4 && sup <= 1e-3 && elapsed <= 10.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "harmonic d=1: |lambda0-1|=%.2e (<=1e-4), sup|phi-closed|=%.2e (<=1e-3), "
                  "runtime=%.2fs (<=10s)",
                  lambda_err, sup, elapsed);
    report_line(1, pass, buf);
    CHECK(lambda_err <= 1e-4);
    CHECK(sup <= 1e-3);
    CHECK(elapsed <= 10.0);
}

TEST_CASE("criterion_2_power_sharp") {
    const GridSpec grid{1, 8.0, 4000, false};
    const auto gs = solve_ground_state(grid, make_power(2.0, 1), 1e-10);
    double rmin = 1e300, rmax = -1e300, qmin = 1e300, qmax = -1e300;
    for (int i = 0; i < grid.points_per_axis; ++i) {
        const double x = grid.coord(i);
        if (x < 3.0 || x > 4.5) continue;
        const double decay = x * x * x / 3.0;
        const double ratio = -std::log(gs.phi0[i]) / decay;
        const double q = std::log(gs.phi0[i]) + std::log(x) + decay;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
    }
    const double band = std::exp(qmax - qmin);
    const bool pass = rmin >= 0.85 && rmax <= 1.15 && band <= 3.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "beta=2 d=1 on x in [3,4.5]: exponent ratio in [%.4f, %.4f] "
                  "(within [0.85,1.15]), comparability band %.3f (<=3)",
                  rmin, rmax, band);
    report_line(2, pass, buf);
    CHECK(rmin >= 0.85);
    CHECK(rmax <= 1.15);
    CHECK(band <= 3.0);
    // Operation-level check over the tail window restricted to the same span.
    const auto op = verify::power_sharp_check(gs, 2.0, 1, 3.0, 4.5);
    CHECK(op.pass);
}

TEST_CASE("criterion_3_theorem_suite") {
    std::vector<SuiteEntry> entries = {
        {make_power(1.0, 1), {1, 10.0, 2001, false}, false},
        {make_power(2.0, 1), {1, 6.5, 2601, false}, false},
        {make_log(1), {1, 22.0, 4401, false}, false},
        {make_affine_power(1.0, 1.0, 1.0, 1), {1, 14.0, 2801, false}, false},
        {make_power(1.0, 2), {2, 9.0, 1801, true}, true},
        {make_power(2.0, 2), {2, 6.0, 1201, true}, true},
    };
    bool all = true;
    std::string worst;
    for (const auto& entry : entries) {
        const auto gs = entry.radial
                            ? solve_radial_ground_state(entry.potential, entry.grid, 1e-10)
                            : solve_ground_state(entry.grid, entry.potential, 1e-10);
        for (double eps : {0.1, 0.5})
            for (double delta : {0.1, 0.5}) {
                const auto lo = verify::theorem_lower_envelope(gs, entry.potential, eps, delta);
                const auto up = verify::theorem_upper_envelope(gs, entry.potential, eps, delta);
                const bool lower_ok = lo.pass && lo.fitted_c > 0.0 && lo.violations == 0 &&
                                      lo.grown_c >= 0.5 * lo.fitted_c;
                const bool upper_ok = up.pass && std::isfinite(up.fitted_c) &&
                                      up.violations == 0 && up.grown_c <= 2.0 * up.fitted_c;
                if (!(lower_ok && upper_ok) && worst.empty())
                    worst = entry.potential.id() + " eps=" + std::to_string(eps) +
                            " delta=" + std::to_string(delta);
                all = all && lower_ok && upper_ok;
                CHECK_MESSAGE(lower_ok, entry.potential.id(), " lower eps=", eps,
                              " delta=", delta);
                CHECK_MESSAGE(upper_ok, entry.potential.id(), " upper eps=", eps,
                              " delta=", delta);
            }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "6 catalog entries x {0.1,0.5}^2: fitted c's positive/finite, zero window "
                  "violations, stable under inner-radius growth%s%s",
                  all ? "" : "; first failure: ", worst.c_str());
    report_line(3, all, buf);
}

TEST_CASE("criterion_4_condition_checkers") {
    const auto log_g = [](double r) { return std::log(M_E + r); };
    const auto sq_g = [](double r) { return r * r; };
    const auto exp_g = [](double r) { return std::exp(r); };
    const auto c1a = potentials::check_condition_I(log_g, 0.1);
    const auto c1b = potentials::check_condition_II(log_g, 0.1, 0.9);
    const auto c2 = potentials::check_condition_II(sq_g, 0.5, 0.5);
    const auto c3a = potentials::check_condition_I(exp_g, 0.1);
    const auto c3b = potentials::check_condition_I(exp_g, 0.5);
    // Determinism: identical scans return identical verdicts and witnesses.
    const auto c1a2 = potentials::check_condition_I(log_g, 0.1);
    const bool deterministic = c1a.holds == c1a2.holds && c1a.delta == c1a2.delta &&
                               c1a.t0 == c1a2.t0;
    const bool pass =
        c1a.holds && c1b.holds && !c2.holds && !c3a.holds && !c3b.holds && deterministic;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "log(e+r): I holds (delta=%g,t0=%.3g), II holds (t0=%.3g); r^2 II(0.5,0.5) "
                  "fails; e^r I fails; verdicts deterministic",
                  c1a.delta, c1a.t0, c1b.t0);
    report_line(4, pass, buf);
    CHECK(c1a.holds);
    CHECK(c1b.holds);
    CHECK_FALSE(c2.holds);
    CHECK_FALSE(c3a.holds);
    CHECK_FALSE(c3b.holds);
    CHECK(deterministic);
}

TEST_CASE("criterion_5_decay_ratio_limit") {
    // Slowly varying half: V = log(e + x^2) with rho = sqrt(V)|x|.
    const auto gs_log = solve_ground_state({1, 22.0, 4401, false}, make_log(1), 1e-10);
    const auto profile = verify::decay_ratio_profile(gs_log);
    const bool log_band = profile.min_ratio >= 0.7 && profile.max_ratio <= 1.3;
    const bool log_intercept = std::abs(profile.intercept - 1.0) <= 0.15;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "log potential: windowed ratio in [%.3f, %.3f] vs required [0.7, 1.3]; "
                  "extrapolated intercept %.3f vs required within 0.15 of 1 "
                  "(double-precision tails reach |x|~18 where the subleading terms of "
                  "-log phi0 are still ~40%% of sqrt(V)|x|)",
                  profile.min_ratio, profile.max_ratio, profile.intercept);
    report_line(5, log_band && log_intercept, buf);

    // Documented failure of condition (II) for powers: ratio near 1/2.
    const auto gs_h = solve_ground_state({1, 10.0, 2001, false}, make_power(1.0, 1), 1e-10);
    const auto ph = verify::decay_ratio_profile(gs_h);
    const bool harmonic_ok = ph.min_ratio >= 0.45 && ph.max_ratio <= 0.55;
    std::snprintf(buf, sizeof buf,
                  "x^2: windowed ratio in [%.3f, %.3f], inside 0.5 +- 0.05 (documents the "
                  "condition (II) failure for powers)",
                  ph.min_ratio, ph.max_ratio);
    report_line(5, harmonic_ok, buf);
    CHECK(harmonic_ok);
    CHECK_MESSAGE(log_band, "windowed ratio [", profile.min_ratio, ", ", profile.max_ratio,
                  "] outside [0.7, 1.3]");
    CHECK_MESSAGE(log_intercept, "extrapolated intercept ", profile.intercept,
                  " not within 0.15 of 1");
}

TEST_CASE("criterion_6_resolvent_and_bessel") {
    bool ok = true;
    // Closed forms in d = 1 and d = 3 to 1e-8 relative.
    for (double lambda : {1.0, 4.0, 16.0})
        for (double y : {0.5, 1.0, 2.0}) {
            const double s = std::sqrt(lambda);
            ok = ok && std::abs(kernels::resolvent_kernel(lambda, y, 1) -
                                std::exp(-s * y) / (2 * s)) <=
                           1e-8 * std::exp(-s * y) / (2 * s);
            ok = ok && std::abs(kernels::resolvent_kernel(lambda, y, 3) -
                                std::exp(-s * y) / (4 * M_PI * y)) <=
                           1e-8 * std::exp(-s * y) / (4 * M_PI * y);
        }
    // Quadrature oracle of the time integral to 1e-6 relative.
    for (int d : {1, 2, 3})
        for (double y : {0.5, 1.5}) {
            const double got = kernels::resolvent_kernel(2.0, y, d);
            ok = ok && std::abs(got - oracle::resolvent_time_integral(2.0, y, d)) <= 1e-6 * got;
        }
    // Generator relation to 1e-9.
    for (int d : {1, 2, 3})
        for (double y : {0.5, 1.0}) {
            const double lhs = kernels::resolvent_kernel_half_laplacian(1.0, y, d);
            const double rhs = 2.0 * kernels::resolvent_kernel(2.0, y, d);
            ok = ok && std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, lhs);
        }
    // Bessel asymptotic ratio band for r >= 5.
    double worst_margin = -1e300;
    for (double v : {0.0, 0.5, 1.0, 1.5})
        for (double r : {5.0, 8.0, 12.0, 20.0, 40.0}) {
            const double ratio =
                std::sqrt(2.0 * r / M_PI) * kernels::bessel_k(v, r) * std::exp(r);
            const double bound = std::abs(4.0 * v * v - 1.0) / (8.0 * r) + 1e-3;
            worst_margin = std::max(worst_margin, std::abs(ratio - 1.0) - bound);
            ok = ok && std::abs(ratio - 1.0) <= bound;
        }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "closed forms d=1,3 <=1e-8; time-integral oracle <=1e-6; generator "
                  "relation <=1e-9; asymptotic band slack %.1e",
                  -worst_margin);
    report_line(6, ok, buf);
    CHECK(ok);
}

TEST_CASE("criterion_7_feynman_kac") {
    const double t0 = now_seconds();
    fk::PathSamplerConfig cfg;
    cfg.paths = 100000;
    cfg.steps = 200;
    cfg.seed = 99991;
    cfg.max_step_doublings = 1;
    bool ok = true;
    // Constant potential: ratio-to-free within 3 stderr of e^{-ct}.
    const auto ec = fk::fk_kernel_estimate(potentials::make_constant(3.0, 1), 0.5,
                                           Point{0.0}, Point{0.0}, cfg);
    ok = ok && std::abs(ec.ratio_to_free - std::exp(-1.5)) <=
                   std::max(3.0 * ec.ratio_stderr, 1e-12);
    // Harmonic kernel at the origin against the closed form.
    const double mehler = oracle::mehler_kernel(0.5, 0.0, 0.0);
    const auto eh =
        fk::fk_kernel_estimate(make_power(1.0, 1), 0.5, Point{0.0}, Point{0.0}, cfg);
    const double harmonic_dev = std::abs(eh.mean - mehler) / eh.stderr_;
    ok = ok && harmonic_dev <= 3.0;
    // Symmetry and domination on a 20-point plan.
    fk::PathSamplerConfig plan_cfg = cfg;
    plan_cfg.paths = 20000;
    plan_cfg.steps = 100;
    int plan_points = 0;
    for (double x : {0.0, 0.5, 1.0, 1.5, 2.0})
        for (double y : {0.0, 0.5})
            for (double t : {0.25, 0.5}) {
                auto ca = plan_cfg, cb = plan_cfg;
                cb.seed ^= 0x5f5f;
                const auto a =
                    fk::fk_kernel_estimate(make_power(1.0, 1), t, Point{x}, Point{y}, ca);
                const auto b =
                    fk::fk_kernel_estimate(make_power(1.0, 1), t, Point{y}, Point{x}, cb);
                ok = ok && std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.stderr_, b.stderr_);
                ok = ok && a.ratio_to_free <= 1.0 && b.ratio_to_free <= 1.0;
                ++plan_points;
            }
    const double elapsed = now_seconds() - t0;
    ok = ok && elapsed <= 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "constant ratio exact to %.1e; harmonic |dev|=%.2f sigma; symmetry and "
                  "domination on %d-point plan; runtime %.1fs (<=60s)",
                  std::abs(ec.ratio_to_free - std::exp(-1.5)), harmonic_dev, plan_points,
                  elapsed);
    report_line(7, ok, buf);
    CHECK(ok);
}

TEST_CASE("criterion_8_exit_time") {
    fk::PathSamplerConfig cfg;
    cfg.paths = 40000;
    cfg.steps = 200;
    cfg.seed = 424243;
    bool ok = true;
    std::string detail;
    for (double lambda : {1.0, 4.0})
        for (double r : {1.0, 2.0}) {
            const auto est = fk::exit_time_laplace(lambda, r, 1, cfg);
            const double closed = 1.0 / std::cosh(r * std::sqrt(lambda));
            const double tol = std::max(3.0 * est.stderr_, 0.02 * closed);
            const bool point_ok = est.bias_converged && std::abs(est.mean - closed) <= tol;
            // Cited-bound consistency with C = 2, eps = 0.1.
            const bool bound_ok =
                est.mean <= 2.0 * std::exp(-0.9 * std::sqrt(lambda) * r) + 3.0 * est.stderr_;
            ok = ok && point_ok && bound_ok;
            char item[96];
            std::snprintf(item, sizeof item, " (%g,%g): err=%+.2e%s", lambda, r,
                          est.mean - closed, point_ok && bound_ok ? "" : " FAIL");
            detail += item;
        }
    report_line(8, ok, "E0[e^{-lambda tau}] vs 1/cosh(r sqrt(lambda)) within max(3se,2%)" +
                           detail);
    CHECK(ok);
}

TEST_CASE("criterion_9_dirichlet_ball_bound") {
    const double mu0 = kernels::principal_dirichlet_eigenvalue(1);
    double fitted = 1e300;
    for (double t : {0.1, 0.2, 0.5, 1.0, 1.5, 2.0})
        for (double x : {0.0, 0.5, -0.5})
            for (double y : {0.0, 0.5, -0.5}) {
                kernels::DirichletBallBoundQuery q{t, {x}, {y}, 1.0, mu0, 1.0};
                const double bound = kernels::dirichlet_ball_lower_bound(q);
                const double exact = oracle::interval_heat_kernel(t, x, y);
                fitted = std::min(fitted, exact / bound);
            }
    const double usable_c = std::min(1.0, fitted);
    const bool pass = usable_c >= 0.2;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "d=1 ball bound vs eigen-series kernel: fitted c=%.4f (>=0.2) over "
                  "t in [0.1,2], x,y in {0,+-0.5}",
                  usable_c);
    report_line(9, pass, buf);
    CHECK(pass);
}

TEST_CASE("criterion_10_reproducibility") {
    namespace fs = std::filesystem;
    const auto root = fs::temp_directory_path() / "gsd_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto out_a = root / "a";
    const auto out_b = root / "b";
    const std::string config = std::string(R"({
      "potential": {"kind": "power", "dimension": 1, "params": {"beta": 1.0}},
      "grid": {"half_width": 9.0, "points_per_axis": 901},
      "envelopes": [{"side": "lower", "epsilon": 0.1, "delta": 0.5}],
      "fk": {"paths": 2000, "steps": 40, "seed": 7, "epsilon": 0.5, "delta": 0.5},
      "exit_time": {"lambda_grid": [1.0], "r_grid": [1.0]},
      "output_dir": ")") + out_a.string() + "\"}";
    const auto cfg_path = root / "config.json";
    std::ofstream(cfg_path) << config;
    const auto run = [&](const std::string& extra) {
        const std::string cmd = std::string(GSDECAY_TOOL_PATH) + " report --config " +
                                cfg_path.string() + " --quiet " + extra + " > " +
                                (root / "log.txt").string() + " 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const int rc1 = run("");
    const int rc2 = run("--out " + out_b.string());
    bool identical = rc1 == 0 && rc2 == 0;
    int compared = 0;
    if (identical) {
        std::vector<fs::path> files_a;
        for (const auto& e : fs::directory_iterator(out_a))
            if (e.path().extension() == ".csv") files_a.push_back(e.path());
        std::sort(files_a.begin(), files_a.end());
        identical = !files_a.empty();
        for (const auto& fa : files_a) {
            const auto fb = out_b / fa.filename();
            std::ifstream ia(fa, std::ios::binary), ib(fb, std::ios::binary);
            std::stringstream sa, sb;
            sa << ia.rdbuf();
            sb << ib.rdbuf();
            identical = identical && fs::exists(fb) && sa.str() == sb.str();
            ++compared;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "two `report` runs, same config and seed: %d CSV files byte-identical "
                  "(exit codes %d, %d)",
                  compared, rc1, rc2);
    report_line(10, identical, buf);
    CHECK(identical);
}

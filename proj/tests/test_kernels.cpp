#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsdecay/kernels.hpp"
#include "oracles.hpp"

using namespace gsd;
using kernels::bessel_k;
using kernels::gauss_kernel_radial;
using kernels::resolvent_kernel;

namespace {
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("gauss kernel closed-form values") {
    // (4 pi)^{-1/2} at coincidence, Gaussian factor off the diagonal.
    CHECK(gauss_kernel_radial(1.0, 0.0, 1) == doctest::Approx(0.28209479177387814).epsilon(1e-14));
    CHECK(gauss_kernel_radial(1.0, 2.0, 1) ==
          doctest::Approx(0.28209479177387814 * std::exp(-1.0)).epsilon(1e-14));
    const Point x{0.3, -0.2}, y{-0.1, 0.4};
    CHECK(kernels::gauss_kernel(0.7, x, y, 2) == kernels::gauss_kernel(0.7, y, x, 2));
    CHECK_THROWS_AS(gauss_kernel_radial(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(kernels::gauss_kernel(1.0, x, Point{1.0}, 2), std::invalid_argument);
}

TEST_CASE("gauss kernel Chapman-Kolmogorov by quadrature") {
    const double x = 0.3, y = -0.7;
    const auto f = [&](double z) {
        return gauss_kernel_radial(0.5, std::abs(z - x), 1) *
               gauss_kernel_radial(0.5, std::abs(y - z), 1);
    };
    const double composed = oracle::adaptive_simpson(f, -30.0, 30.0, 1e-12);
    CHECK(std::abs(composed - gauss_kernel_radial(1.0, std::abs(y - x), 1)) < 1e-8);
}

TEST_CASE("gauss kernel has unit mass in d = 1..3") {
    for (int d = 1; d <= 3; ++d) {
        const double surface = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
        const double t = 0.8;
        const auto f = [&](double r) {
            return surface * std::pow(r, d - 1) * gauss_kernel_radial(t, r, d);
        };
        const double mass = oracle::adaptive_simpson(f, 0.0, 30.0, 1e-10);
        CHECK(std::abs(mass - 1.0) < 1e-6);
    }
}

TEST_CASE("bessel K half-integer closed forms") {
    CHECK(rel_err(bessel_k(0.5, 1.0), std::sqrt(M_PI / 2.0) * std::exp(-1.0)) < 1e-14);
    // K_{3/2}(r) = sqrt(pi/2r) e^{-r} (1 + 1/r)
    for (double r : {0.3, 1.0, 7.0})
        CHECK(rel_err(bessel_k(1.5, r),
                      std::sqrt(M_PI / (2.0 * r)) * std::exp(-r) * (1.0 + 1.0 / r)) < 1e-13);
    // negative order symmetry
    CHECK(bessel_k(-0.5, 2.0) == bessel_k(0.5, 2.0));
}

TEST_CASE("bessel K against the integral representation") {
    // Contract: relative error <= 1e-10 on both sides of the series/continued
    // fraction crossover at r = 2, for the orders d/2-1 with d <= 10.
    for (double v : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
        for (double r : {0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 5.0, 8.0, 12.0, 20.0, 40.0}) {
            const double want = oracle::bessel_k_integral(v, r);
            CHECK_MESSAGE(rel_err(bessel_k(v, r), want) < 1e-10,
                          "v=", v, " r=", r, " got=", bessel_k(v, r), " want=", want);
        }
    }
    // Frozen spot value, derived from the integral oracle.
    CHECK(bessel_k(0.0, 1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("bessel K recurrence identity") {
    for (double v : {0.5, 1.0, 1.5, 2.0})
        for (double r : {0.3, 1.0, 2.5, 6.0, 15.0}) {
            const double lhs = bessel_k(v + 1.0, r);
            const double rhs = bessel_k(v - 1.0, r) + (2.0 * v / r) * bessel_k(v, r);
            CHECK(rel_err(lhs, rhs) < 1e-9);
        }
}

TEST_CASE("bessel K large-argument asymptotic band") {
    // |sqrt(2r/pi) K_v(r) e^r - 1| <= |4v^2-1|/(8r) + 1e-3 for r >= 5.
    for (double v : {0.0, 0.5, 1.0, 1.5})
        for (double r : {5.0, 6.0, 8.0, 10.0, 20.0, 50.0}) {
            const double ratio = std::sqrt(2.0 * r / M_PI) * bessel_k(v, r) * std::exp(r);
            CHECK(std::abs(ratio - 1.0) <= std::abs(4.0 * v * v - 1.0) / (8.0 * r) + 1e-3);
        }
    // First-order correction at r=10, v=1 is (4-1)/80 = 0.0375, inside 0.05.
    const double ratio = std::sqrt(20.0 / M_PI) * bessel_k(1.0, 10.0) * std::exp(10.0);
    CHECK(std::abs(ratio - 1.0) < 0.05);
}

TEST_CASE("resolvent kernel closed forms in d = 1 and d = 3") {
    CHECK(rel_err(resolvent_kernel(1.0, 1.0, 1), std::exp(-1.0) / 2.0) < 1e-12);
    CHECK(rel_err(resolvent_kernel(1.0, 1.0, 3), std::exp(-1.0) / (4.0 * M_PI)) < 1e-12);
    for (double lambda : {1.0, 4.0, 16.0})
        for (double y : {0.25, 1.0, 3.0}) {
            const double s = std::sqrt(lambda);
            CHECK(rel_err(resolvent_kernel(lambda, y, 1), std::exp(-s * y) / (2.0 * s)) < 1e-12);
            CHECK(rel_err(resolvent_kernel(lambda, y, 3),
                          std::exp(-s * y) / (4.0 * M_PI * y)) < 1e-8);
        }
}

TEST_CASE("resolvent kernel equals the time integral of the heat kernel") {
    for (int d : {1, 2, 3})
        for (double lambda : {1.0, 2.5})
            for (double y : {0.5, 1.0, 2.0}) {
                const double want = oracle::resolvent_time_integral(lambda, y, d);
                CHECK_MESSAGE(rel_err(resolvent_kernel(lambda, y, d), want) < 1e-6,
                              "d=", d, " lambda=", lambda, " y=", y);
            }
}

TEST_CASE("resolvent kernel relation between generator conventions") {
    for (int d : {1, 2, 3})
        for (double lambda : {0.5, 1.0, 3.0})
            for (double y : {0.3, 1.0, 2.0}) {
                const double lhs = kernels::resolvent_kernel_half_laplacian(lambda, y, d);
                const double rhs = 2.0 * resolvent_kernel(2.0 * lambda, y, d);
                CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), 1.0));
            }
}

TEST_CASE("resolvent kernel monotone in distance and spectral parameter") {
    for (int d : {1, 2, 3}) {
        double prev = resolvent_kernel(1.0, 0.2, d);
        for (double y = 0.4; y <= 4.0; y += 0.2) {
            const double cur = resolvent_kernel(1.0, y, d);
            CHECK(cur < prev);
            prev = cur;
        }
        prev = resolvent_kernel(0.5, 1.0, d);
        for (double lambda = 1.0; lambda <= 8.0; lambda += 0.5) {
            const double cur = resolvent_kernel(lambda, 1.0, d);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("resolvent kernel mass is 1/lambda") {
    for (int d : {1, 2, 3})
        for (double lambda : {1.0, 4.0}) {
            const double surface = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
            const auto f = [&](double r) {
                if (r == 0.0) return 0.0;
                return surface * std::pow(r, d - 1) * resolvent_kernel(lambda, r, d);
            };
            const double mass =
                oracle::adaptive_simpson(f, 0.0, 60.0 / std::sqrt(lambda), 1e-9 / lambda);
            CHECK(std::abs(mass - 1.0 / lambda) < 1e-6);
        }
}

TEST_CASE("resolvent kernel singularity handling") {
    CHECK(resolvent_kernel(4.0, 0.0, 1) == doctest::Approx(0.25));  // finite limit in d = 1
    CHECK_THROWS_AS(resolvent_kernel(1.0, 0.0, 2), std::domain_error);
    CHECK_THROWS_AS(resolvent_kernel(1.0, 0.0, 3), std::domain_error);
    CHECK_THROWS_AS(resolvent_kernel(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("resolvent lower-bound witness") {
    // d = 1: r_lambda(y) e^{(1+eps) sqrt(lambda) y} = e^{eps sqrt(lambda) y}/(2 sqrt(lambda))
    // >= 1/(2 sqrt(lambda_max)) on the scan.
    const auto w1 = kernels::resolvent_lower_bound_witness(0.1, 1, 16.0, 10.0);
    CHECK(w1.c > 0.0);
    CHECK(w1.c >= 1.0 / (2.0 * std::sqrt(16.0)) - 1e-12);
    const auto w3 = kernels::resolvent_lower_bound_witness(0.1, 3, 16.0, 10.0);
    CHECK(w3.c > 0.0);
    CHECK(w3.rho >= 1.0);
    CHECK_THROWS_AS(kernels::resolvent_lower_bound_witness(0.0, 1), std::invalid_argument);
}

TEST_CASE("principal Dirichlet eigenvalue of the unit ball") {
    CHECK(kernels::principal_dirichlet_eigenvalue(1) ==
          doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-14));
    CHECK(kernels::principal_dirichlet_eigenvalue(3) ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-14));
    // d = 2: square of the first zero of J_0 (j_{0,1} = 2.404825557695773).
    CHECK(kernels::principal_dirichlet_eigenvalue(2) ==
          doctest::Approx(5.783185962946785).epsilon(1e-9));
    double prev = 0.0;
    for (int d = 1; d <= 10; ++d) {
        const double mu = kernels::principal_dirichlet_eigenvalue(d);
        CHECK(mu > prev);
        prev = mu;
    }
    CHECK_THROWS_AS(kernels::principal_dirichlet_eigenvalue(0), std::invalid_argument);
    CHECK_THROWS_AS(kernels::principal_dirichlet_eigenvalue(11), std::invalid_argument);
}

TEST_CASE("dirichlet ball lower bound arithmetic") {
    const double mu0 = M_PI * M_PI / 4.0;
    kernels::DirichletBallBoundQuery q{1.0, {0.0}, {0.0}, 1.0, mu0, 1.0};
    const double want = std::exp(-mu0) * gauss_kernel_radial(1.0, 0.0, 1);
    CHECK(kernels::dirichlet_ball_lower_bound(q) == doctest::Approx(want).epsilon(1e-14));
    // Boundary factor vanishes on the sphere.
    q.x = {1.0};
    CHECK(kernels::dirichlet_ball_lower_bound(q) == 0.0);
    q.x = {1.5};
    CHECK_THROWS_AS(kernels::dirichlet_ball_lower_bound(q), std::invalid_argument);
    q.x = {0.0};
    q.c = 1.5;
    CHECK_THROWS_AS(kernels::dirichlet_ball_lower_bound(q), std::invalid_argument);
    q.c = 1.0;
    q.t = 0.0;
    CHECK_THROWS_AS(kernels::dirichlet_ball_lower_bound(q), std::invalid_argument);
}

TEST_CASE("dirichlet ball bound sits below the exact interval kernel") {
    const double mu0 = M_PI * M_PI / 4.0;
    // Exact series value at the center dominates the bound.
    const double exact = oracle::interval_heat_kernel(1.0, 0.0, 0.0);
    kernels::DirichletBallBoundQuery q{1.0, {0.0}, {0.0}, 1.0, mu0, 1.0};
    const double bound = kernels::dirichlet_ball_lower_bound(q);
    CHECK(exact > bound);
    // Fitted structural constant stays well away from zero on a (t, x, y) grid.
    double fitted = 1.0;
    for (double t : {0.1, 0.3, 0.5, 1.0, 2.0})
        for (double x : {0.0, 0.5, -0.5})
            for (double y : {0.0, 0.5, -0.5}) {
                kernels::DirichletBallBoundQuery qq{t, {x}, {y}, 1.0, mu0, 1.0};
                fitted = std::min(fitted, oracle::interval_heat_kernel(t, x, y) /
                                              kernels::dirichlet_ball_lower_bound(qq));
            }
    CHECK(fitted > 0.2);
}

TEST_CASE("library interval kernel matches the series oracle") {
    for (double t : {0.1, 0.5, 1.5})
        for (double x : {-0.4, 0.0, 0.7})
            for (double y : {-0.8, 0.1}) {
                CHECK(kernels::dirichlet_interval_kernel(t, x, y) ==
                      doctest::Approx(oracle::interval_heat_kernel(t, x, y)).epsilon(1e-12));
            }
    CHECK_THROWS_AS(kernels::dirichlet_interval_kernel(-1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernels::dirichlet_interval_kernel(1.0, 2.0, 0.0), std::invalid_argument);
}

#pragma once

#include <span>

#include "gsdecay/point.hpp"

namespace gsd::kernels {

// Gauss-Weierstrass kernel g_t(x,y) = (4*pi*t)^{-d/2} exp(-|y-x|^2/(4t)),
// the transition density of the process generated by the full Laplacian.
double gauss_kernel(double t, std::span<const double> x, std::span<const double> y, int d);
double gauss_kernel_radial(double t, double distance, int d);

// Modified Bessel function of the second kind K_v(r), r > 0.
// Half-integer orders use the elementary closed forms; otherwise a power
// series is used below r = 2 and a continued fraction above, which keeps the
// relative error under 1e-10 on both sides of the crossover.
double bessel_k(double v, double r);

// Bessel function of the first kind J_v(x) for small integer/half-integer
// v >= 0 and moderate x; only used to locate principal Dirichlet eigenvalues.
double bessel_j(double v, double x);

struct ResolventQuery {
    double lambda = 1.0;  // must be > 0
    Point y;              // displacement; must be nonzero in d >= 2
    int dimension = 1;
};

// Kernel r_lambda(y) of the lambda-potential operator of the Laplacian,
// i.e. the Laplace transform in t of g_t(y).
double resolvent_kernel(const ResolventQuery& q);
double resolvent_kernel(double lambda, double distance, int d);

// Same object for the generator (1/2)Laplacian; satisfies
// resolvent_kernel_half_laplacian(lambda, y) = 2 * resolvent_kernel(2*lambda, y).
double resolvent_kernel_half_laplacian(double lambda, double distance, int d);

struct ResolventWitness {
    double rho;         // inner radius of the scanned |y| window
    double c;           // min over the scan of r_lambda(y) * exp((1+eps)*sqrt(lambda)|y|)
    double lambda_max;  // scan extent, part of the witness statement
    double y_max;
};

// Scans lambda in [1, lambda_max], |y| in [rho, y_max] and reports the
// largest constant c such that r_lambda(y) >= c exp(-(1+eps) sqrt(lambda)|y|)
// holds at every scanned point. rho is chosen from the first-order error of
// the large-argument Bessel asymptotic.
ResolventWitness resolvent_lower_bound_witness(double epsilon, int d,
                                               double lambda_max = 16.0,
                                               double y_max = 10.0,
                                               int grid_points = 48);

struct DirichletBallBoundQuery {
    double t = 1.0;
    Point x;
    Point y;
    double r = 1.0;   // ball radius
    double mu0 = 0.0; // principal Dirichlet eigenvalue of the unit ball
    double c = 1.0;   // structural constant in (0,1]
};

// Right-hand side of the Dirichlet heat-kernel lower bound on B_r(0):
//   c * [1 ^ (r-|x|)(r-|y|)/t] / (1 ^ r^2/t)^{(d+2)/2} * exp(-mu0 t/r^2) * g_t(x,y).
double dirichlet_ball_lower_bound(const DirichletBallBoundQuery& q);

// First eigenvalue of the (positive) Dirichlet Laplacian on the unit ball:
// the square of the first positive zero of J_{d/2-1}. Closed forms for d = 1
// and d = 3, root finding otherwise; supported for d <= 10.
double principal_dirichlet_eigenvalue(int d);

// Exact heat kernel of the Dirichlet Laplacian on the interval (-r, r)
// (generator = full 1-d Laplacian), by eigenfunction series. Used to fit the
// structural constant in the ball lower bound.
double dirichlet_interval_kernel(double t, double x, double y, double r = 1.0,
                                 int terms = 80);

}  // namespace gsd::kernels

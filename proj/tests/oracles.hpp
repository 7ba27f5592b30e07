#pragma once

// Test-side oracles: quadrature, closed-form kernels and dense eigensolves
// used to derive expected values independently of the library paths they
// check.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 48) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// K_v(r) = int_0^inf exp(-r cosh s) cosh(v s) ds. The integrand is scaled by
// e^{+r} so the quadrature tolerance stays on an O(1) quantity; the factor is
// restored at the end.
inline double bessel_k_integral(double v, double r) {
    v = std::abs(v);
    double smax = 3.0;
    while (r * (std::cosh(smax) - 1.0) - v * smax < 760.0 && smax < 60.0) smax += 0.5;
    const auto f = [v, r](double s) {
        const double a = r * (std::cosh(s) - 1.0);
        const double b = v * s;
        // cosh(v s) can overflow on its own; combine the exponents first.
        if (b > 500.0) return 0.5 * (std::exp(b - a) + std::exp(-b - a));
        return std::exp(-a) * std::cosh(b);
    };
    // Pilot pass fixes the magnitude (higher orders blow up at small r), the
    // adaptive pass then works to a relative tolerance.
    double pilot = 0.0;
    const int pn = 2048;
    for (int i = 0; i <= pn; ++i) {
        const double w = (i == 0 || i == pn) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        pilot += w * f(smax * i / pn);
    }
    pilot *= smax / (3.0 * pn);
    return std::exp(-r) * adaptive_simpson(f, 0.0, smax, 1e-13 * std::max(pilot, 1e-3));
}

// r_lambda(y) = int_0^inf e^{-lambda t} (4 pi t)^{-d/2} e^{-|y|^2/(4t)} dt,
// computed with the substitution t = s^2 to tame the small-t behaviour. The
// integrand is scaled by e^{+sqrt(lambda)|y|} (its peak exponent) so the
// quadrature tolerance is relative to an O(1) profile.
inline double resolvent_time_integral(double lambda, double dist, int d) {
    if (dist <= 0.0) throw std::invalid_argument("resolvent oracle: need |y| > 0");
    const double peak_exponent = std::sqrt(lambda) * dist;
    const double smax = std::sqrt((46.0 + peak_exponent) / lambda);
    const auto f = [=](double s) {
        if (s == 0.0) return 0.0;
        const double t = s * s;
        const double e = -lambda * t - dist * dist / (4.0 * t) + peak_exponent;
        return 2.0 * s * std::exp(e) * std::pow(4.0 * M_PI * t, -0.5 * d);
    };
    const double scaled = adaptive_simpson(f, 0.0, smax, 1e-12);
    return std::exp(-peak_exponent) * scaled;
}

// Kernel of -d^2/dx^2 + x^2 (Mehler form for the full Laplacian convention).
inline double mehler_kernel(double t, double x, double y) {
    const double s2 = std::sinh(2.0 * t), c2 = std::cosh(2.0 * t);
    return std::pow(2.0 * M_PI * s2, -0.5) *
           std::exp(-((x * x + y * y) * c2 - 2.0 * x * y) / (2.0 * s2));
}

inline double mehler_kernel_nd(double t, const std::vector<double>& x,
                               const std::vector<double>& y) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) prod *= mehler_kernel(t, x[i], y[i]);
    return prod;
}

// Dirichlet heat kernel on (-r, r) by eigenfunction series (own copy, kept
// independent of the library's series).
inline double interval_heat_kernel(double t, double x, double y, double r = 1.0,
                                   int terms = 200) {
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double w = k * M_PI / (2.0 * r);
        const double decay = std::exp(-w * w * t);
        // Individual terms can vanish by symmetry, so truncate on the decay
        // factor alone.
        if (decay < 1e-18 * std::max(1.0, std::abs(sum)) && k > 3) break;
        sum += decay * std::sin(w * (x + r)) * std::sin(w * (y + r)) / r;
    }
    return sum;
}

struct DensePair {
    double value0 = 0.0;
    double value1 = 0.0;
    Eigen::VectorXd vec0;
};

inline DensePair dense_smallest(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    DensePair out;
    out.value0 = es.eigenvalues()(0);
    out.value1 = es.eigenvalues()(1);
    out.vec0 = es.eigenvectors().col(0);
    return out;
}

// Strang-split transfer-matrix approximation of u_t(x,y) for a 1-d potential:
// T = e^{-V dt/2} g_dt e^{-V dt/2}, composed m times on a uniform grid.
inline double trotter_kernel(const std::function<double(double)>& V, double t, double x,
                             double y, double L, int n, int m) {
    const double h = 2.0 * L / (n - 1);
    Eigen::MatrixXd T(n, n);
    const double dt = t / m;
    std::vector<double> xs(n), halfweight(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = -L + i * h;
        halfweight[i] = std::exp(-0.5 * dt * V(xs[i]));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double diff = xs[i] - xs[j];
            T(i, j) = halfweight[i] *
                      std::pow(4.0 * M_PI * dt, -0.5) * std::exp(-diff * diff / (4.0 * dt)) *
                      h * halfweight[j];
        }
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd base = T;
    int k = m;
    while (k > 0) {
        if (k & 1) P = P * base;
        base = base * base;
        k >>= 1;
    }
    const int ix = static_cast<int>(std::lround((x + L) / h));
    const int iy = static_cast<int>(std::lround((y + L) / h));
    return P(ix, iy) / h;
}

}  // namespace oracle

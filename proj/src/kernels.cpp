#include "gsdecay/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gsd::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

bool is_half_odd_integer(double v) {
    const double two_v = 2.0 * v;
    const double r = std::round(two_v);
    return std::abs(two_v - r) < 1e-12 && std::llround(r) % 2 != 0;
}

// K_{1/2+k}(r) by upward recurrence from the elementary K_{1/2} = K_{-1/2}.
double bessel_k_half_integer(double v, double r) {
    const double k_half = std::sqrt(kPi / (2.0 * r)) * std::exp(-r);
    int steps = static_cast<int>(std::llround(v - 0.5));
    double km = k_half;  // K_{-1/2}
    double kc = k_half;  // K_{1/2}
    double nu = 0.5;
    for (int i = 0; i < steps; ++i) {
        const double kn = km + (2.0 * nu / r) * kc;
        km = kc;
        kc = kn;
        nu += 1.0;
    }
    return kc;
}

struct KPair {
    double k_mu;
    double k_mu1;
};

// Temme's series for K_mu, K_{mu+1} with |mu| <= 1/2, valid for r < 2.
KPair bessel_k_temme(double mu, double r) {
    constexpr int kMaxIt = 400;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const double x2 = 0.5 * r;
    const double pimu = kPi * mu;
    const double fact = (std::abs(pimu) < 1e-14) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::abs(e) < 1e-14) ? 1.0 : std::sinh(e) / e;
    double gampl, gammi, gam1, gam2;
    if (std::abs(mu) < 1e-8) {
        gampl = 1.0;
        gammi = 1.0;
        gam1 = -kEulerGamma;
        gam2 = 1.0;
    } else {
        gampl = 1.0 / std::tgamma(1.0 + mu);
        gammi = 1.0 / std::tgamma(1.0 - mu);
        gam1 = (gammi - gampl) / (2.0 * mu);
        gam2 = 0.5 * (gammi + gampl);
    }
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kMaxIt; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return {sum, sum1 * (2.0 / r)};
}

// Steed/Thompson-Barnett continued fraction for K_mu, K_{mu+1}, r >= 2.
KPair bessel_k_cf2(double mu, double r) {
    constexpr int kMaxIt = 10000;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + r);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIt; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    const double k_mu = std::sqrt(kPi / (2.0 * r)) * std::exp(-r) / s;
    const double k_mu1 = k_mu * (mu + r + 0.5 - h) / r;
    return {k_mu, k_mu1};
}

}  // namespace

double gauss_kernel_radial(double t, double distance, int d) {
    if (t <= 0.0) throw std::invalid_argument("gauss_kernel: t must be positive");
    if (d < 1) throw std::invalid_argument("gauss_kernel: dimension must be >= 1");
    return std::pow(4.0 * kPi * t, -0.5 * d) *
           std::exp(-distance * distance / (4.0 * t));
}

double gauss_kernel(double t, std::span<const double> x, std::span<const double> y, int d) {
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        throw std::invalid_argument("gauss_kernel: dimension mismatch");
    return gauss_kernel_radial(t, dist(x, y), d);
}

double bessel_k(double v, double r) {
    if (r <= 0.0) throw std::invalid_argument("bessel_k: argument must be positive");
    v = std::abs(v);  // K_{-v} = K_v
    if (is_half_odd_integer(v)) return bessel_k_half_integer(v, r);
    const int nl = static_cast<int>(v + 0.5);
    const double mu = v - nl;
    KPair kp = (r < 2.0) ? bessel_k_temme(mu, r) : bessel_k_cf2(mu, r);
    double km = kp.k_mu;
    double kc = kp.k_mu1;
    double nu = mu + 1.0;
    for (int i = 1; i < nl; ++i) {
        const double kn = km + (2.0 * nu / r) * kc;
        km = kc;
        kc = kn;
        nu += 1.0;
    }
    return nl == 0 ? km : kc;
}

double bessel_j(double v, double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be nonnegative");
    // Alternating power series; fine for the moderate arguments needed to
    // bracket first zeros of orders up to 4.
    if (x > 30.0) throw std::invalid_argument("bessel_j: argument out of supported range");
    const double xh = 0.5 * x;
    double term = std::pow(xh, v) / std::tgamma(v + 1.0);
    double sum = term;
    for (int k = 1; k <= 200; ++k) {
        term *= -(xh * xh) / (k * (k + v));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double resolvent_kernel(double lambda, double distance, int d) {
    if (lambda <= 0.0) throw std::invalid_argument("resolvent_kernel: lambda must be positive");
    if (d < 1) throw std::invalid_argument("resolvent_kernel: dimension must be >= 1");
    const double s = std::sqrt(lambda);
    if (d == 1) return std::exp(-s * distance) / (2.0 * s);
    if (distance <= 0.0)
        throw std::domain_error("resolvent_kernel: singular at y = 0 for d >= 2");
    const double v = 0.5 * d - 1.0;
    return 0.5 * std::pow(kPi, -0.5 * d) * std::pow(s / (2.0 * distance), v) *
           bessel_k(v, s * distance);
}

double resolvent_kernel(const ResolventQuery& q) {
    if (static_cast<int>(q.y.size()) != q.dimension)
        throw std::invalid_argument("resolvent_kernel: dimension mismatch");
    return resolvent_kernel(q.lambda, norm(q.y), q.dimension);
}

double resolvent_kernel_half_laplacian(double lambda, double distance, int d) {
    return 2.0 * resolvent_kernel(2.0 * lambda, distance, d);
}

ResolventWitness resolvent_lower_bound_witness(double epsilon, int d,
                                               double lambda_max, double y_max,
                                               int grid_points) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("resolvent_lower_bound_witness: epsilon must be positive");
    const double v = 0.5 * d - 1.0;
    // Keep the first-order asymptotic correction |4v^2-1|/(8 rho) below 1/4.
    const double rho = std::max(1.0, std::abs(4.0 * v * v - 1.0) / 2.0);
    double c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double u = static_cast<double>(i) / (grid_points - 1);
        const double lambda = std::exp(std::log(1.0) + u * std::log(lambda_max));
        for (int j = 0; j < grid_points; ++j) {
            const double w = static_cast<double>(j) / (grid_points - 1);
            const double y = rho + w * (y_max - rho);
            const double ratio = resolvent_kernel(lambda, y, d) *
                                 std::exp((1.0 + epsilon) * std::sqrt(lambda) * y);
            c = std::min(c, ratio);
        }
    }
    return {rho, c, lambda_max, y_max};
}

double dirichlet_ball_lower_bound(const DirichletBallBoundQuery& q) {
    const int d = static_cast<int>(q.x.size());
    if (q.y.size() != q.x.size())
        throw std::invalid_argument("dirichlet_ball_lower_bound: dimension mismatch");
    if (q.t <= 0.0) throw std::invalid_argument("dirichlet_ball_lower_bound: t must be positive");
    if (q.c <= 0.0 || q.c > 1.0)
        throw std::invalid_argument("dirichlet_ball_lower_bound: c must lie in (0,1]");
    const double nx = norm(q.x);
    const double ny = norm(q.y);
    if (nx > q.r || ny > q.r)
        throw std::invalid_argument("dirichlet_ball_lower_bound: points must lie in the ball");
    const double boundary = std::min(1.0, (q.r - nx) * (q.r - ny) / q.t);
    const double denom = std::pow(std::min(1.0, q.r * q.r / q.t), 0.5 * (d + 2));
    return q.c * (boundary / denom) * std::exp(-q.mu0 * q.t / (q.r * q.r)) *
           gauss_kernel(q.t, q.x, q.y, d);
}

double principal_dirichlet_eigenvalue(int d) {
    if (d < 1) throw std::invalid_argument("principal_dirichlet_eigenvalue: d must be >= 1");
    if (d > 10)
        throw std::invalid_argument("principal_dirichlet_eigenvalue: supported for d <= 10");
    if (d == 1) return 0.25 * kPi * kPi;
    if (d == 3) return kPi * kPi;
    const double v = 0.5 * d - 1.0;
    // First positive zero of J_v: bracket by outward scan, then bisect.
    double a = v + 1e-3;
    double fa = bessel_j(v, a);
    double b = a;
    double fb = fa;
    for (int i = 0; i < 4000; ++i) {
        b += 0.01;
        fb = bessel_j(v, b);
        if (fa * fb <= 0.0) break;
        a = b;
        fa = fb;
    }
    if (fa * fb > 0.0)
        throw std::runtime_error("principal_dirichlet_eigenvalue: zero bracketing failed");
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = bessel_j(v, m);
        if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a < 1e-15 * b) break;
    }
    const double j0 = 0.5 * (a + b);
    return j0 * j0;
}

double dirichlet_interval_kernel(double t, double x, double y, double r, int terms) {
    if (t <= 0.0) throw std::invalid_argument("dirichlet_interval_kernel: t must be positive");
    if (std::abs(x) > r || std::abs(y) > r)
        throw std::invalid_argument("dirichlet_interval_kernel: points must lie in (-r, r)");
    // Eigenpairs of the Dirichlet Laplacian on (-r, r): mu_k = (k pi / 2r)^2,
    // phi_k(x) = sin(k pi (x+r) / 2r) / sqrt(r).
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double omega = k * kPi / (2.0 * r);
        const double decay = std::exp(-omega * omega * t);
        if (decay < 1e-18 && k > 2) break;
        sum += decay * std::sin(omega * (x + r)) * std::sin(omega * (y + r)) / r;
    }
    return sum;
}

}  // namespace gsd::kernels

#include "gsdecay/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "gsdecay/errors.hpp"

namespace gsd::spectral {

namespace {

constexpr double kMeshWarningThreshold = 1.0;  // V * h^2 at the domain edge

double sphere_surface(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Multi-index walk over the interior lattice of a full grid.
struct LatticeIndexer {
    int d;
    int interior;  // nodes per axis minus the two boundary nodes

    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < d; ++i) s *= interior;
        return s;
    }
    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < d; ++a) f = f * interior + idx[a];
        return f;
    }
};

// --- extended-precision tridiagonal LDL^T -------------------------------

struct Tridiag {
    std::vector<long double> diag, off;  // symmetric; off has size n-1
    std::vector<long double> d, l;       // factorization

    void factor() {
        const std::size_t n = diag.size();
        d.resize(n);
        l.resize(n > 0 ? n - 1 : 0);
        d[0] = diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            l[i - 1] = off[i - 1] / d[i - 1];
            d[i] = diag[i] - off[i - 1] * l[i - 1];
            if (!(d[i] > 0.0L))
                throw SolverError("tridiagonal factorization lost positive definiteness");
        }
    }
    void solve(std::vector<long double>& b) const {
        const std::size_t n = diag.size();
        for (std::size_t i = 1; i < n; ++i) b[i] -= l[i - 1] * b[i - 1];
        for (std::size_t i = 0; i < n; ++i) b[i] /= d[i];
        for (std::size_t i = n - 1; i-- > 0;) b[i] -= l[i] * b[i + 1];
    }
    void apply(const std::vector<long double>& v, std::vector<long double>& out) const {
        const std::size_t n = diag.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            long double s = diag[i] * v[i];
            if (i > 0) s += off[i - 1] * v[i - 1];
            if (i + 1 < n) s += off[i] * v[i + 1];
            out[i] = s;
        }
    }
};

struct EigenPairResult {
    std::vector<long double> vec;  // normalized in the Euclidean norm
    double value = 0.0;
    double gap = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

long double norm2(const std::vector<long double>& v) {
    long double s = 0.0L;
    for (long double c : v) s += c * c;
    return std::sqrt(s);
}

EigenPairResult inverse_iteration_tridiag(const Tridiag& a, const SolveOptions& opts) {
    const std::size_t n = a.diag.size();
    EigenPairResult out;
    std::vector<long double> v(n, 1.0L), av;
    long double theta = 0.0L;
    long double res = std::numeric_limits<long double>::infinity();
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        a.solve(v);
        const long double nv = norm2(v);
        for (auto& c : v) c /= nv;
        a.apply(v, av);
        theta = 0.0L;
        for (std::size_t i = 0; i < n; ++i) theta += v[i] * av[i];
        long double r2 = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const long double r = av[i] - theta * v[i];
            r2 += r * r;
        }
        res = std::sqrt(r2);
        if (static_cast<double>(res) <= opts.tol && iter + 1 >= opts.min_iterations) break;
    }
    if (static_cast<double>(res) > opts.tol)
        throw SolverError("inverse iteration did not converge: residual " +
                          std::to_string(static_cast<double>(res)) + " after " +
                          std::to_string(iter) + " iterations");
    // Deflated second pair for the gap diagnostic.
    std::vector<long double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? 1.0L : -1.0L;
    long double theta2 = 0.0L;
    for (int k = 0; k < 60; ++k) {
        a.solve(u);
        long double proj = 0.0L;
        for (std::size_t i = 0; i < n; ++i) proj += u[i] * v[i];
        for (std::size_t i = 0; i < n; ++i) u[i] -= proj * v[i];
        const long double nu = norm2(u);
        if (nu == 0.0L) break;
        for (auto& c : u) c /= nu;
    }
    a.apply(u, av);
    for (std::size_t i = 0; i < n; ++i) theta2 += u[i] * av[i];
    out.vec = std::move(v);
    out.value = static_cast<double>(theta);
    out.gap = static_cast<double>(theta2 - theta);
    out.residual = static_cast<double>(res);
    out.iterations = iter + 1;
    return out;
}

struct EigenPairResultD {
    Eigen::VectorXd vec;
    double value = 0.0;
    double gap = 0.0;
    double residual = 0.0;
};

EigenPairResultD inverse_iteration_sparse(const Eigen::SparseMatrix<double>& a,
                                          const SolveOptions& opts) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(a);
    if (chol.info() != Eigen::Success)
        throw SolverError("sparse factorization failed");
    const Eigen::Index n = a.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    double theta = 0.0;
    double res = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        v = chol.solve(v);
        v.normalize();
        const Eigen::VectorXd av = a * v;
        theta = v.dot(av);
        res = (av - theta * v).norm();
        if (res <= opts.tol && iter + 1 >= opts.min_iterations) break;
    }
    if (res > opts.tol)
        throw SolverError("inverse iteration did not converge: residual " +
                          std::to_string(res) + " after " + std::to_string(iter) +
                          " iterations");
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k < 60; ++k) {
        u = chol.solve(u);
        u -= u.dot(v) * v;
        const double nu = u.norm();
        if (nu == 0.0) break;
        u /= nu;
    }
    const double theta2 = u.dot(a * u);
    return {std::move(v), theta, theta2 - theta, res};
}

void sign_normalize_and_check_positivity(std::vector<double>& interior,
                                         std::vector<std::string>& warnings) {
    double extreme = 0.0;
    for (double c : interior)
        if (std::abs(c) > std::abs(extreme)) extreme = c;
    if (extreme < 0.0)
        for (double& c : interior) c = -c;
    for (double c : interior)
        if (c <= 0.0) {
            warnings.push_back(
                "discretization failure: nonpositive interior eigenvector entries");
            break;
        }
}

}  // namespace

void GridSpec::validate() const {
    if (dimension < 1) throw std::invalid_argument("grid: dimension must be >= 1");
    if (!radial && dimension > 3)
        throw std::invalid_argument("grid: full grids support d <= 3; use the radial path");
    if (half_width <= 0.0) throw std::invalid_argument("grid: half_width must be positive");
    if (points_per_axis < 16) throw std::invalid_argument("grid: need at least 16 points per axis");
}

void Hamiltonian::apply(const std::vector<double>& v, std::vector<double>& out) const {
    if (tridiagonal) {
        const std::size_t n = diag.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += off[i - 1] * v[i - 1];
            if (i + 1 < n) s += off[i] * v[i + 1];
            out[i] = s;
        }
    } else {
        Eigen::Map<const Eigen::VectorXd> vm(v.data(), v.size());
        Eigen::VectorXd r = mat * vm;
        out.assign(r.data(), r.data() + r.size());
    }
}

Eigen::MatrixXd Hamiltonian::dense() const {
    if (tridiagonal) {
        const Eigen::Index n = diag.size();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i + 1 < n) {
                m(i, i + 1) = off[i];
                m(i + 1, i) = off[i];
            }
        }
        return m;
    }
    return Eigen::MatrixXd(mat);
}

Hamiltonian assemble_hamiltonian(const GridSpec& grid,
                                 const potentials::PotentialSpec& potential) {
    grid.validate();
    if (!grid.radial && potential.dimension != grid.dimension)
        throw std::invalid_argument("assemble: potential dimension does not match the grid");
    Hamiltonian ham;
    ham.grid = grid;
    const double h = grid.mesh();
    const double inv_h2 = 1.0 / (h * h);

    if (grid.radial) {
        // Reduced operator on w(r) = r^{(d-1)/2} u(r):
        //   -w'' + [g(r) + (d-1)(d-3)/(4 r^2)] w,  w(0) = w(L) = 0.
        // The centrifugal diagonal is discretized so that the operator
        // annihilates the zero-energy solution r^{(d-1)/2} exactly; this is
        // the identical value for odd d and regularizes the first nodes for
        // even d (notably -1/(4r^2) in d = 2).
        const int d = potential.dimension;
        const int n = grid.points_per_axis;
        const double p = 0.5 * (d - 1);
        ham.tridiagonal = true;
        ham.diag.resize(n - 2);
        ham.off.assign(n - 3 >= 0 ? n - 3 : 0, -inv_h2);
        for (int i = 1; i <= n - 2; ++i) {
            const double r = grid.coord(i);
            double centrifugal = 0.0;
            if (d >= 2 && p > 0.0) {
                const double ip = std::pow(static_cast<double>(i), p);
                centrifugal = (std::pow(i + 1.0, p) - 2.0 * ip + std::pow(i - 1.0, p)) /
                              (ip * h * h);
            }
            ham.diag[i - 1] = 2.0 * inv_h2 + potential.radial_profile(r) + centrifugal;
        }
        const double edge_v = potential.radial_profile(grid.half_width);
        if (edge_v * h * h > kMeshWarningThreshold)
            ham.warnings.push_back("mesh too coarse for the potential scale at the domain edge");
        return ham;
    }

    const int d = grid.dimension;
    const int n = grid.points_per_axis;
    const int interior = n - 2;
    if (d == 1) {
        ham.tridiagonal = true;
        ham.diag.resize(interior);
        ham.off.assign(interior - 1, -inv_h2);
        Point x(1);
        for (int i = 0; i < interior; ++i) {
            x[0] = grid.coord(i + 1);
            ham.diag[i] = 2.0 * inv_h2 + potential(x);
        }
    } else {
        LatticeIndexer li{d, interior};
        const std::size_t total = li.size();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(total * (1 + 2 * d));
        std::vector<int> idx(d, 0);
        Point x(d);
        while (true) {
            const std::size_t row = li.flat(idx);
            for (int a = 0; a < d; ++a) x[a] = grid.coord(idx[a] + 1);
            trip.emplace_back(row, row, 2.0 * d * inv_h2 + potential(x));
            for (int a = 0; a < d; ++a) {
                std::size_t stride = 1;
                for (int b = a + 1; b < d; ++b) stride *= interior;
                if (idx[a] > 0) trip.emplace_back(row, row - stride, -inv_h2);
                if (idx[a] + 1 < interior) trip.emplace_back(row, row + stride, -inv_h2);
            }
            int a = d - 1;
            for (; a >= 0; --a) {
                if (++idx[a] < interior) break;
                idx[a] = 0;
            }
            if (a < 0) break;
        }
        ham.mat.resize(total, total);
        ham.mat.setFromTriplets(trip.begin(), trip.end());
    }
    Point corner(d, grid.half_width);
    if (potential(corner) * h * h > kMeshWarningThreshold)
        ham.warnings.push_back("mesh too coarse for the potential scale at the domain edge");
    return ham;
}

namespace {

GroundState finalize_full_grid(const GridSpec& grid,
                               const potentials::PotentialSpec& potential,
                               std::vector<double> interior, double lambda0, double gap,
                               double residual, std::vector<std::string> warnings) {
    const int d = grid.dimension;
    const int n = grid.points_per_axis;
    const int in = n - 2;
    sign_normalize_and_check_positivity(interior, warnings);

    GroundState gs;
    gs.grid = grid;
    gs.potential = potential;
    gs.lambda0 = lambda0;
    gs.spectral_gap = gap;
    gs.residual = residual;
    gs.warnings = std::move(warnings);
    const double h = grid.mesh();
    const double w = std::pow(h, d);

    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    gs.phi0.assign(total, 0.0);
    gs.node_weight.assign(total, w);

    // Scatter interior values into the full lattice (boundary stays zero).
    LatticeIndexer li{d, in};
    std::vector<int> idx(d, 0);
    while (true) {
        std::size_t full = 0;
        for (int a = 0; a < d; ++a) full = full * n + (idx[a] + 1);
        gs.phi0[full] = interior[li.flat(idx)];
        int a = d - 1;
        for (; a >= 0; --a) {
            if (++idx[a] < in) break;
            idx[a] = 0;
        }
        if (a < 0) break;
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < total; ++i) mass += gs.phi0[i] * gs.phi0[i] * w;
    const double scale = 1.0 / std::sqrt(mass);
    for (double& c : gs.phi0) c *= scale;
    return gs;
}

}  // namespace

GroundState solve_ground_state(const GridSpec& grid,
                               const potentials::PotentialSpec& potential, double tol) {
    SolveOptions opts;
    opts.tol = tol;
    return solve_ground_state(grid, potential, opts);
}

GroundState solve_ground_state(const GridSpec& grid,
                               const potentials::PotentialSpec& potential,
                               const SolveOptions& opts) {
    if (grid.radial) return solve_radial_ground_state(potential, grid, opts.tol);
    Hamiltonian ham = assemble_hamiltonian(grid, potential);
    if (ham.tridiagonal) {
        Tridiag a;
        a.diag.assign(ham.diag.begin(), ham.diag.end());
        a.off.assign(ham.off.begin(), ham.off.end());
        a.factor();
        EigenPairResult r = inverse_iteration_tridiag(a, opts);
        std::vector<double> interior(r.vec.begin(), r.vec.end());
        return finalize_full_grid(grid, potential, std::move(interior), r.value, r.gap,
                                  r.residual, std::move(ham.warnings));
    }
    EigenPairResultD r = inverse_iteration_sparse(ham.mat, opts);
    std::vector<double> interior(r.vec.data(), r.vec.data() + r.vec.size());
    return finalize_full_grid(grid, potential, std::move(interior), r.value, r.gap,
                              r.residual, std::move(ham.warnings));
}

GroundState solve_radial_ground_state(const potentials::PotentialSpec& potential,
                                      const GridSpec& grid, double tol) {
    if (!potential.radial)
        throw std::invalid_argument("radial solve: potential has no radial profile");
    GridSpec rgrid = grid;
    rgrid.radial = true;
    rgrid.validate();
    const int d = potential.dimension;
    const int n = rgrid.points_per_axis;
    const double h = rgrid.mesh();
    SolveOptions opts;
    opts.tol = tol;

    if (d == 1) {
        // Identical problem on the full line; fold the right half.
        GridSpec full;
        full.dimension = 1;
        full.half_width = rgrid.half_width;
        full.points_per_axis = 2 * n - 1;
        full.radial = false;
        potentials::PotentialSpec pot1 = potential;
        pot1.dimension = 1;
        GroundState line = solve_ground_state(full, pot1, opts);
        GroundState gs;
        gs.grid = rgrid;
        gs.potential = potential;
        gs.lambda0 = line.lambda0;
        gs.spectral_gap = line.spectral_gap;
        gs.residual = line.residual;
        gs.warnings = line.warnings;
        gs.phi0.resize(n);
        gs.node_weight.assign(n, 2.0 * h);
        gs.node_weight[0] = h;
        gs.node_weight[n - 1] = h;
        const int center = n - 1;  // index of x = 0 in the full-line grid
        for (int i = 0; i < n; ++i) gs.phi0[i] = line.phi0[center + i];
        return gs;
    }

    Hamiltonian ham = assemble_hamiltonian(rgrid, potential);
    Tridiag a;
    a.diag.assign(ham.diag.begin(), ham.diag.end());
    a.off.assign(ham.off.begin(), ham.off.end());
    a.factor();
    EigenPairResult r = inverse_iteration_tridiag(a, opts);
    std::vector<double> w(r.vec.begin(), r.vec.end());
    sign_normalize_and_check_positivity(w, ham.warnings);

    GroundState gs;
    gs.grid = rgrid;
    gs.potential = potential;
    gs.lambda0 = r.value;
    gs.spectral_gap = r.gap;
    gs.residual = r.residual;
    gs.warnings = std::move(ham.warnings);
    gs.phi0.assign(n, 0.0);
    gs.node_weight.assign(n, 0.0);
    const double p = 0.5 * (d - 1);
    const double surface = sphere_surface(d);
    for (int i = 1; i <= n - 2; ++i) {
        const double rr = rgrid.coord(i);
        gs.phi0[i] = w[i - 1] / std::pow(rr, p);
        gs.node_weight[i] = surface * std::pow(rr, d - 1) * h;
    }
    // u(0) by even extrapolation; zero weight keeps it out of the mass.
    gs.phi0[0] = (4.0 * gs.phi0[1] - gs.phi0[2]) / 3.0;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) mass += gs.phi0[i] * gs.phi0[i] * gs.node_weight[i];
    const double scale = 1.0 / std::sqrt(mass);
    for (double& c : gs.phi0) c *= scale;
    return gs;
}

double eigen_residual(const GroundState& gs) {
    const int n = gs.grid.points_per_axis;
    Hamiltonian ham;
    std::vector<double> v;
    if (gs.grid.radial) {
        const double p = 0.5 * (gs.potential.dimension - 1);
        if (gs.potential.dimension == 1) {
            // The d = 1 radial state came from the folded full-line problem;
            // rebuild that operator and interior vector.
            GridSpec full;
            full.dimension = 1;
            full.half_width = gs.grid.half_width;
            full.points_per_axis = 2 * n - 1;
            full.radial = false;
            ham = assemble_hamiltonian(full, gs.potential);
            const int full_interior = 2 * n - 3;
            v.resize(full_interior);
            for (int i = 0; i < full_interior; ++i) {
                const int offset = std::abs(i - (n - 2));  // distance from center node
                v[i] = gs.phi0[offset];
            }
        } else {
            ham = assemble_hamiltonian(gs.grid, gs.potential);
            v.resize(n - 2);
            for (int i = 1; i <= n - 2; ++i)
                v[i - 1] = gs.phi0[i] * std::pow(gs.grid.coord(i), p);
        }
    } else {
        ham = assemble_hamiltonian(gs.grid, gs.potential);
        const int d = gs.grid.dimension;
        const int in = n - 2;
        LatticeIndexer li{d, in};
        v.resize(li.size());
        std::vector<int> idx(d, 0);
        while (true) {
            std::size_t full = 0;
            for (int a = 0; a < d; ++a) full = full * n + (idx[a] + 1);
            v[li.flat(idx)] = gs.phi0[full];
            int a = d - 1;
            for (; a >= 0; --a) {
                if (++idx[a] < in) break;
                idx[a] = 0;
            }
            if (a < 0) break;
        }
    }
    std::vector<double> av;
    ham.apply(v, av);
    double r2 = 0.0, v2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = av[i] - gs.lambda0 * v[i];
        r2 += r * r;
        v2 += v[i] * v[i];
    }
    return std::sqrt(r2 / v2);
}

std::vector<RaySamples> extract_rays(const GroundState& gs) {
    std::vector<RaySamples> rays;
    const int n = gs.grid.points_per_axis;
    const int d = gs.grid.dimension;
    if (gs.grid.radial) {
        RaySamples ray;
        ray.direction = Point(d, 0.0);
        ray.direction[0] = 1.0;
        for (int i = 1; i < n; ++i) {
            ray.radius.push_back(gs.grid.coord(i));
            ray.phi.push_back(gs.phi0[i]);
        }
        rays.push_back(std::move(ray));
        return rays;
    }
    if (d == 1) {
        // Signed axis rays work for any parity; take nodes on each side of 0.
        for (double sgn : {+1.0, -1.0}) {
            RaySamples ray;
            ray.direction = {sgn};
            for (int i = 0; i < n; ++i) {
                const double x = gs.grid.coord(i);
                if (sgn * x > 0.0) {
                    ray.radius.push_back(std::abs(x));
                    ray.phi.push_back(gs.phi0[i]);
                }
            }
            rays.push_back(std::move(ray));
        }
        return rays;
    }
    if (n % 2 == 0)
        throw std::invalid_argument("ray extraction needs an odd per-axis point count in d >= 2");
    const int c = (n - 1) / 2;
    auto flat = [&](const std::vector<int>& idx) {
        std::size_t f = 0;
        for (int a = 0; a < d; ++a) f = f * n + idx[a];
        return f;
    };
    std::vector<Point> directions;
    for (int a = 0; a < d; ++a)
        for (double sgn : {+1.0, -1.0}) {
            Point dir(d, 0.0);
            dir[a] = sgn;
            directions.push_back(dir);
        }
    for (int m = 0; m < (1 << d) && directions.size() < 8; ++m) {
        Point dir(d);
        for (int a = 0; a < d; ++a) dir[a] = ((m >> a) & 1) ? -1.0 : 1.0;
        const double nn = norm(dir);
        for (double& cdir : dir) cdir /= nn;
        directions.push_back(dir);
    }
    for (const auto& dir : directions) {
        RaySamples ray;
        ray.direction = dir;
        // Walk integer steps k along the direction pattern (unit steps in
        // each nonzero component).
        for (int k = 1; k <= c; ++k) {
            std::vector<int> idx(d);
            bool inside = true;
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const int step = static_cast<int>(std::round(
                    dir[a] == 0.0 ? 0.0 : (dir[a] > 0.0 ? 1.0 : -1.0)));
                idx[a] = c + step * k;
                if (idx[a] < 0 || idx[a] >= n) inside = false;
                const double x = gs.grid.coord(idx[a]);
                r2 += x * x;
            }
            if (!inside) break;
            ray.radius.push_back(std::sqrt(r2));
            ray.phi.push_back(gs.phi0[flat(idx)]);
        }
        rays.push_back(std::move(ray));
    }
    return rays;
}

void write_ground_state_csv(const GroundState& gs, const std::string& path,
                            const std::vector<std::string>& extra_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[512];
    for (const auto& line : extra_header) out << "# " << line << "\n";
    std::snprintf(buf, sizeof buf,
                  "# lambda0=%.17g residual=%.17g gap=%.17g dimension=%d half_width=%.17g "
                  "points_per_axis=%d radial=%d potential=%s",
                  gs.lambda0, gs.residual, gs.spectral_gap, gs.grid.dimension,
                  gs.grid.half_width, gs.grid.points_per_axis, gs.grid.radial ? 1 : 0,
                  gs.potential.id().c_str());
    out << buf << "\n";
    for (const auto& w : gs.warnings) out << "# warning: " << w << "\n";
    const int d = gs.grid.dimension;
    const int n = gs.grid.points_per_axis;
    if (gs.grid.radial) {
        out << "r,phi0,V\n";
        for (int i = 0; i < n; ++i) {
            const double r = gs.grid.coord(i);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r, gs.phi0[i],
                          gs.potential.radial_profile(r));
            out << buf;
        }
        return;
    }
    for (int a = 0; a < d; ++a) out << "x" << (a + 1) << ",";
    out << "phi0,V\n";
    std::vector<int> idx(d, 0);
    Point x(d);
    while (true) {
        std::size_t full = 0;
        for (int a = 0; a < d; ++a) {
            full = full * n + idx[a];
            x[a] = gs.grid.coord(idx[a]);
        }
        std::string row;
        for (int a = 0; a < d; ++a) {
            std::snprintf(buf, sizeof buf, "%.17g,", x[a]);
            row += buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", gs.phi0[full], gs.potential(x));
        row += buf;
        out << row;
        int a = d - 1;
        for (; a >= 0; --a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
        if (a < 0) break;
    }
}

}  // namespace gsd::spectral

#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "gsdecay/potentials.hpp"

namespace gsd::spectral {

struct GridSpec {
    int dimension = 1;
    double half_width = 10.0;  // domain [-L, L]^d, or [0, L] on the radial path
    int points_per_axis = 2001;
    bool radial = false;

    double mesh() const {
        return (radial ? half_width : 2.0 * half_width) / (points_per_axis - 1);
    }
    double coord(int i) const { return radial ? i * mesh() : -half_width + i * mesh(); }
    void validate() const;
};

// Assembled H = -Laplacian + V on the interior nodes with Dirichlet
// truncation. One-dimensional problems (full-line d = 1 and the radial
// reduction) keep tridiagonal arrays and are solved in extended precision;
// full grids in d >= 2 use a sparse matrix.
struct Hamiltonian {
    GridSpec grid;
    bool tridiagonal = false;
    std::vector<double> diag;  // tridiagonal path, interior nodes
    std::vector<double> off;
    Eigen::SparseMatrix<double> mat;  // sparse path
    std::vector<std::string> warnings;

    std::size_t size() const { return tridiagonal ? diag.size() : mat.rows(); }
    void apply(const std::vector<double>& v, std::vector<double>& out) const;
    Eigen::MatrixXd dense() const;  // small problems only (diagnostics, tests)
};

Hamiltonian assemble_hamiltonian(const GridSpec& grid,
                                 const potentials::PotentialSpec& potential);

struct GroundState {
    GridSpec grid;
    potentials::PotentialSpec potential;
    double lambda0 = 0.0;
    double spectral_gap = 0.0;       // lambda1 - lambda0, diagnostic
    std::vector<double> phi0;        // all lattice nodes; boundary entries zero
    std::vector<double> node_weight; // L^2 mesh weights matching phi0
    double residual = 0.0;
    std::vector<std::string> warnings;

    // Tail window: phi0 in [1e-12, 1e-3] * max phi0; decay assertions
    // quantify over this window only.
    static constexpr double kWindowFloor = 1e-12;
    static constexpr double kWindowCap = 1e-3;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iterations = 400;
    int min_iterations = 40;
};

GroundState solve_ground_state(const GridSpec& grid,
                               const potentials::PotentialSpec& potential,
                               double tol = 1e-10);
GroundState solve_ground_state(const GridSpec& grid,
                               const potentials::PotentialSpec& potential,
                               const SolveOptions& opts);

// Radial reduction on w(r) = r^{(d-1)/2} u(r); reports u on [0, L].
// d = 1 solves the equivalent full-line problem and folds it.
GroundState solve_radial_ground_state(const potentials::PotentialSpec& potential,
                                      const GridSpec& grid, double tol = 1e-10);

// Recomputes ||H phi0 - lambda0 phi0|| / ||phi0|| on the stored grid.
double eigen_residual(const GroundState& gs);

struct RaySamples {
    Point direction;  // unit vector
    std::vector<double> radius;
    std::vector<double> phi;
};

// Samples phi0 along coordinate axes plus diagonals (capped at 8 rays).
// Full grids need an odd per-axis count in d >= 2 so rays pass through 0.
std::vector<RaySamples> extract_rays(const GroundState& gs);

// CSV columns: node coordinates, phi0, V; key=value header lines carry
// lambda0 and the grid metadata.
void write_ground_state_csv(const GroundState& gs, const std::string& path,
                            const std::vector<std::string>& extra_header = {});

}  // namespace gsd::spectral

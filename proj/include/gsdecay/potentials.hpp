#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gsdecay/point.hpp"

namespace gsd::potentials {

enum class Kind {
    Power,                 // V(x) = |x|^{2 beta}
    AffinePower,           // V(x) = a |x|^alpha + b
    Log,                   // V(x) = log(e + |x|^2)
    AnisotropicQuadratic,  // V(x) = sum_i a_i x_i^2
    ConstantPlus,          // V(x) = c  (not confining; validation-only uses)
    Exp,                   // V(x) = exp(rate |x|)
    Custom,                // tabulated, multilinear inside its bounding box
};

// Tabulated potential on a tensor-product lattice; multilinear interpolation
// inside the bounding box, rejected outside it.
struct CustomTable {
    int dimension = 1;
    std::vector<std::vector<double>> axes;  // strictly increasing per axis
    std::vector<double> values;             // row-major over the lattice
    double eval(std::span<const double> x) const;
    double box_radius() const;  // largest |x| with the cube [-r, r]^d inside the box
};

struct PotentialSpec {
    Kind kind = Kind::Power;
    int dimension = 1;
    bool radial = true;
    bool confining = true;
    // Parameter slots, meaning fixed per kind:
    //   Power: p[0] = beta; AffinePower: p = {a, b, alpha};
    //   ConstantPlus: p[0] = c; Exp: p[0] = rate.
    std::vector<double> p;
    std::vector<double> aniso;  // AnisotropicQuadratic coefficients, size d
    std::shared_ptr<const CustomTable> table;

    double operator()(std::span<const double> x) const;
    // Radial profile g with V(x) = g(|x|); only for radial kinds.
    double radial_profile(double r) const;
    bool radial_nondecreasing() const;
    std::string id() const;  // compact tag used in file names and reports
};

PotentialSpec make_power(double beta, int d);
PotentialSpec make_affine_power(double a, double b, double alpha, int d);
PotentialSpec make_log(int d);
PotentialSpec make_aniso_quadratic(std::vector<double> coeffs);
PotentialSpec make_constant(double c, int d);
PotentialSpec make_exp(double rate, int d);
PotentialSpec make_custom(std::shared_ptr<const CustomTable> table, bool radial = false);

// Reads a custom table from CSV rows "x1,...,xd,value" forming a full
// tensor-product lattice.
std::shared_ptr<const CustomTable> load_custom_table_csv(const std::string& path,
                                                         int dimension);

double eval_potential(const PotentialSpec& spec, std::span<const double> x);

struct ProfilePoint {
    Point x;
    double delta = 0.0;
    double value = 0.0;
    Point extremizer;
    double tolerance = 0.0;  // sampling slack; 0 when the value is exact
};

// V^delta(x): sup of V over the closed ball of radius |x|+delta centered at
// the origin. Exact boundary value for radial nondecreasing kinds, coarse
// lattice scan plus compass refinement otherwise.
ProfilePoint profile_sup(const PotentialSpec& spec, std::span<const double> x,
                         double delta, int scan_per_axis = 33);

// V_delta(x): inf of V over the open ball of radius delta*|x| centered at x.
ProfilePoint profile_inf(const PotentialSpec& spec, std::span<const double> x,
                         double delta, int scan_per_axis = 33);

struct ConditionCheck {
    bool holds = false;
    double delta = 0.0;  // witness for condition (I); input echo for (II)
    double t0 = 0.0;     // witness threshold within the scanned window
    double t_max = 0.0;  // scan extent; the verdict is windowed, not asymptotic
    std::string note;
};

// Condition (I): exists delta > 0 and t0 with g((1+delta) t) <= (1+eps) g(t)
// for all t in (t0, t_max]. The delta grid is geometric, {0.5, 0.25, ...}
// down to 1e-4; t is sampled on a log grid.
ConditionCheck check_condition_I(const std::function<double(double)>& g, double epsilon,
                                 double t_max = 1e12, int resolution = 2400);

// Condition (II): for the given (eps, delta), exists t0 with
// g((1-delta) t) >= (1-eps) g(t) for all t in (t0, t_max].
ConditionCheck check_condition_II(const std::function<double(double)>& g, double epsilon,
                                  double delta, double t_max = 1e12, int resolution = 2400);

}  // namespace gsd::potentials

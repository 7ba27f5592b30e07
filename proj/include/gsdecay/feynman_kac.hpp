#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gsdecay/point.hpp"
#include "gsdecay/potentials.hpp"

namespace gsd::fk {

struct PathSamplerConfig {
    int paths = 20000;  // N; antithetic sampling pairs them up
    int steps = 100;    // m, midpoint-rule resolution of the time integral
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    enum class Scheme { Bridge, Forward } scheme = Scheme::Bridge;
    bool antithetic = true;
    int batch = 4096;            // paths per RNG stream
    int max_step_doublings = 2;  // midpoint-rule refinement rounds
    double b = 2.0;              // Hoelder split for the upper sandwich; a = b/(b-1)

    void validate() const;
};

struct KernelEstimate {
    double t = 0.0;
    Point x, y;
    double mean = 0.0;    // estimate of u_t(x,y)
    double stderr_ = 0.0;
    double ratio_to_free = 0.0;  // mean / g_t(x,y)
    double ratio_stderr = 0.0;
    long long paths = 0;
    int steps_used = 0;
    bool bias_converged = true;  // doubling the step count moved the mean < 1 stderr
    bool low_precision = false;  // stderr/mean > 0.5
};

// Monte Carlo estimate of the semigroup kernel u_t(x,y) via pinned bridges of
// the process generated by the Laplacian (per-coordinate variance 2s at time
// s); the time integral of V along the path uses the midpoint rule, with the
// step count doubled until the estimate settles within one standard error.
KernelEstimate fk_kernel_estimate(const potentials::PotentialSpec& potential, double t,
                                  std::span<const double> x, std::span<const double> y,
                                  const PathSamplerConfig& cfg);

struct MeanEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    bool bias_converged = true;
};

// Forward-scheme estimate of (U_t f)(x) = E_x[ exp(-int V) f(X_t) ].
MeanEstimate fk_semigroup_apply(const potentials::PotentialSpec& potential,
                                const std::function<double(std::span<const double>)>& f,
                                double t, std::span<const double> x,
                                const PathSamplerConfig& cfg);

// E_0[ exp(-lambda tau_{B_r(0)}) ] for the process generated by the
// Laplacian, with a per-step Brownian-bridge boundary-crossing correction.
// bias_converged is cleared when halving the step moves the estimate by more
// than two combined standard errors.
MeanEstimate exit_time_laplace(double lambda, double r, int d,
                               const PathSamplerConfig& cfg);

struct SandwichSample {
    Point x, y;
    double t = 0.0;
};

struct SandwichSampleResult {
    SandwichSample sample;
    double estimate = 0.0;       // u_t(x,y) estimate
    double estimate_stderr = 0.0;
    double envelope = 0.0;       // comparison kernel value
    double ratio = 0.0;          // estimate / envelope
    double ratio_stderr = 0.0;
    double profile_value = 0.0;  // V^delta(x) or V_delta(x)
};

struct SandwichCheckResult {
    enum class Side { Lower, Upper } side = Side::Lower;
    double epsilon = 0.0;
    double delta = 0.0;
    double fitted_constant = 0.0;  // c1 (min ratio) or c (max ratio)
    double fitted_stderr = 0.0;
    double stderr_budget = 3.0;
    bool pass = false;
    bool stable = true;  // refit on half the sample paths stays within 2x
    std::vector<SandwichSampleResult> samples;
    std::vector<std::string> rejected;    // samples failing preconditions, with reason
    std::vector<std::size_t> violations;  // indices breaching an invariant beyond budget
    double a = 0.0;                       // upper side: Hoelder exponent b/(b-1)
    double rho1 = 0.0;                    // lower side: minimal |x| admitted
};

// Pluggable kernel estimator, so closed-form oracles can stand in for Monte
// Carlo in tests.
using KernelEstimator = std::function<KernelEstimate(const SandwichSample&)>;

// Smallest radius (>= 2) at which mu0/(|x|+delta)^2 + 1/delta^2 <=
// epsilon * V^delta(x); admission threshold for the lower sandwich.
double lower_sandwich_min_radius(const potentials::PotentialSpec& potential,
                                 double epsilon, double delta, double r_max = 1e4);

// u_t(x,y) >= c1 exp(-(1+eps) V^delta(x) t) g_t(x,y) with fitted c1; samples
// need y in B_1(0) and |x| >= rho1.
SandwichCheckResult check_lower_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const KernelEstimator& estimate);
SandwichCheckResult check_lower_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const PathSamplerConfig& cfg);

// u_t(x,y) <= c exp(-( V_delta(x) t / a  ^  (1-eps) delta sqrt(V_delta(x)) |x| ))
// g_{a t}(x,y) with fitted c; requires (1-eps) sqrt(b) < 1.
SandwichCheckResult check_upper_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const KernelEstimator& estimate, double b = 2.0);
SandwichCheckResult check_upper_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const PathSamplerConfig& cfg);

void write_sandwich_csv(const SandwichCheckResult& result, const std::string& path,
                        const std::vector<std::string>& extra_header = {});

}  // namespace gsd::fk

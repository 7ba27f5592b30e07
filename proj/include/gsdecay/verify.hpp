#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsdecay/potentials.hpp"
#include "gsdecay/spectral.hpp"

namespace gsd::verify {

struct EnvelopeSpec {
    enum class Side { Lower, Upper } side = Side::Lower;
    double epsilon = 0.1;  // > 0 for the lower side, in (0,1) for the upper
    double delta = 0.5;    // in (0,1)
};

struct EnvelopeRow {
    int ray = 0;
    double radius = 0.0;
    double phi = 0.0;
    double profile = 0.0;       // V^delta or V_delta at the sample
    double envelope_log = 0.0;  // log of the unit-constant envelope
    double ratio_log = 0.0;     // log(phi) - envelope_log
};

struct EnvelopeFit {
    EnvelopeSpec spec;
    double eps_prime = 0.0;       // split exponent bookkeeping behind epsilon
    double fitted_c = 0.0;        // min (lower) / max (upper) of phi/envelope
    double fitted_c_log = 0.0;
    double witness_radius = 0.0;  // window inner radius: the bound holds beyond it
    double window_outer = 0.0;
    double grown_c = 0.0;         // refit with the inner radius moved to mid-window
    int violations = 0;           // window points breaching the fitted bound
    bool pass = false;
    double hoelder_a = 0.0;    // upper side only
    double prefactor_A = 0.0;  // upper side only
    std::vector<EnvelopeRow> rows;
};

// Fits c in phi0(x) >= c exp(-(1+eps) sqrt(V^delta(x)) |x|) over the tail
// window. Passing means c > 0 with zero violations and no degradation beyond
// a factor 2 when the window's inner radius grows (the fit over a shrunken
// window can only move away from failure; the check guards the direction).
EnvelopeFit theorem_lower_envelope(const spectral::GroundState& gs,
                                   const potentials::PotentialSpec& potential,
                                   double epsilon, double delta);

// Fits c in phi0(x) <= c exp(-(1-eps) delta sqrt(V_delta(x)) |x|) over the
// tail window; pass requires a finite stable constant.
EnvelopeFit theorem_upper_envelope(const spectral::GroundState& gs,
                                   const potentials::PotentialSpec& potential,
                                   double epsilon, double delta);

struct RatioRow {
    int ray = 0;
    double radius = 0.0;
    double ratio = 0.0;  // -log phi0 / rho
};

struct RatioProfile {
    std::vector<RatioRow> rows;
    double slope = 0.0;      // least squares of ratio against 1/|x|
    double intercept = 0.0;  // extrapolated limit; compare to 1
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

// Windowed profile of -log phi0(x) / rho(x) along rays, with the 1/|x| trend.
RatioProfile decay_ratio_profile(const spectral::GroundState& gs,
                                 const std::function<double(std::span<const double>)>& rho);
// Default rho(x) = sqrt(V(x)) |x|.
RatioProfile decay_ratio_profile(const spectral::GroundState& gs);

struct PowerSharpRow {
    double radius = 0.0;
    double exponent_ratio = 0.0;     // -log phi0 / (r^{1+beta}/(1+beta))
    double comparability_log = 0.0;  // log of phi0 * r^{beta/2-(d-1)/2} * e^{r^{1+beta}/(1+beta)}
};

struct PowerSharpResult {
    double beta = 0.0;
    bool in_regime = false;  // beta > 1
    std::vector<PowerSharpRow> rows;
    double band = 0.0;  // max/min of the comparability quantity over the window
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    bool pass = false;
    std::string note;
};

// Two-sided comparability against r^{-beta/2+(d-1)/2} exp(-r^{1+beta}/(1+beta))
// for V = |x|^{2 beta}; the window may be clamped to [r_lo, r_hi].
PowerSharpResult power_sharp_check(const spectral::GroundState& gs, double beta, int d,
                                   double r_lo = 0.0,
                                   double r_hi = std::numeric_limits<double>::infinity(),
                                   double band_limit = 3.0);

struct VerifyOptions {
    spectral::GridSpec grid;
    double solver_tol = 1e-10;
    std::vector<EnvelopeSpec> envelopes;  // empty selects the {0.1, 0.5}^2 defaults
    bool prefer_radial = true;            // radial reduction for radial potentials, d >= 2
    bool run_conditions = true;
    double condition_epsilon = 0.1;
    double condition_delta = 0.9;
    double condition_t_max = 1e12;
    bool run_ratio_profile = true;
    bool run_power_sharp = true;  // applies to the power kind only
};

struct VerificationReport {
    std::string potential_id;
    spectral::GridSpec grid;
    double lambda0 = 0.0;
    double residual = 0.0;
    double spectral_gap = 0.0;
    std::vector<std::string> warnings;
    std::vector<EnvelopeFit> envelopes;
    std::optional<RatioProfile> ratio_profile;
    std::optional<potentials::ConditionCheck> condition_I;
    std::optional<potentials::ConditionCheck> condition_II;
    std::string condition_note;
    std::optional<PowerSharpResult> power_sharp;
    double solver_tol = 0.0;
    bool pass = false;  // envelope suite plus power-sharp when applicable

    std::string to_text() const;
};

VerificationReport run_verification(const potentials::PotentialSpec& potential,
                                    const VerifyOptions& opts);

// report.txt plus per-profile CSV tables under dir, names built from prefix.
void write_report_files(const VerificationReport& report, const std::string& dir,
                        const std::string& prefix,
                        const std::vector<std::string>& extra_header = {});

}  // namespace gsd::verify

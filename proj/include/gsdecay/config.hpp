#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsdecay/feynman_kac.hpp"
#include "gsdecay/potentials.hpp"
#include "gsdecay/spectral.hpp"
#include "gsdecay/verify.hpp"

namespace gsd::config {

inline constexpr const char* kVersion = "0.1.0";

struct CheckFlags {
    bool envelope = true;
    bool conditions = true;
    bool ratio_profile = true;
    bool power_sharp = true;
    bool sandwich = true;
    bool resolvent = true;
    bool exit_time = true;
    bool dirichlet_bound = true;
};

struct RunConfig {
    potentials::PotentialSpec potential;
    spectral::GridSpec grid;
    double solver_tol = 1e-10;
    bool prefer_radial = true;

    std::vector<verify::EnvelopeSpec> envelopes;  // empty: {0.1, 0.5}^2 defaults
    double condition_epsilon = 0.1;
    double condition_delta = 0.9;
    double condition_t_max = 1e12;

    fk::PathSamplerConfig fk_cfg;
    std::vector<fk::SandwichSample> fk_plan;  // empty: a built-in default plan
    double fk_epsilon = 0.5;
    double fk_delta = 0.5;

    double resolvent_epsilon = 0.1;
    std::vector<double> resolvent_lambda_grid{1.0, 4.0, 16.0};
    double resolvent_y_max = 10.0;

    std::vector<double> exit_lambda_grid{1.0, 4.0};
    std::vector<double> exit_r_grid{1.0, 2.0};

    std::vector<double> dirichlet_t_grid{0.1, 0.5, 1.0, 2.0};
    std::vector<double> dirichlet_points{0.0, 0.5, -0.5};
    double dirichlet_min_c = 0.2;

    CheckFlags checks;
    std::string output_dir = "out";

    std::uint64_t hash = 0;  // FNV-1a of the canonical document

    verify::VerifyOptions verify_options() const;
};

// Parses and validates a config document; rejects unknown keys and reports
// offending fields by path.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::string hash_hex(std::uint64_t hash);

}  // namespace gsd::config

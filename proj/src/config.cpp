#include "gsdecay/config.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "gsdecay/errors.hpp"

namespace gsd::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error: " + path + ": " + what);
}

void reject_unknown(const json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& path, const char* key,
                  double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) fail(path + "." + key, "expected a boolean");
    return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_string()) fail(path + "." + key, "expected a string");
    return j[key].get<std::string>();
}

std::vector<double> get_array(const json& j, const std::string& path, const char* key,
                              std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

potentials::PotentialSpec parse_potential(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"kind", "dimension", "params", "coefficients", "table", "radial"});
    const std::string kind = get_string(j, path, "kind", "", true);
    const int d = static_cast<int>(get_number(j, path, "dimension", 1));
    if (d < 1) fail(path + ".dimension", "must be >= 1");
    json params = j.contains("params") ? j["params"] : json::object();
    if (!params.is_object()) fail(path + ".params", "expected an object");
    const std::string ppath = path + ".params";
    try {
        if (kind == "power") {
            reject_unknown(params, ppath, {"beta"});
            return potentials::make_power(get_number(params, ppath, "beta", 1.0), d);
        }
        if (kind == "affine-power") {
            reject_unknown(params, ppath, {"a", "b", "alpha"});
            return potentials::make_affine_power(get_number(params, ppath, "a", 1.0),
                                                 get_number(params, ppath, "b", 0.0),
                                                 get_number(params, ppath, "alpha", 1.0), d);
        }
        if (kind == "log") {
            reject_unknown(params, ppath, {});
            return potentials::make_log(d);
        }
        if (kind == "anisotropic-quadratic") {
            reject_unknown(params, ppath, {});
            auto coeffs = get_array(j, path, "coefficients", {});
            if (static_cast<int>(coeffs.size()) != d)
                fail(path + ".coefficients", "need exactly dimension entries");
            return potentials::make_aniso_quadratic(std::move(coeffs));
        }
        if (kind == "constant-plus") {
            reject_unknown(params, ppath, {"c"});
            return potentials::make_constant(get_number(params, ppath, "c", 1.0), d);
        }
        if (kind == "exp") {
            reject_unknown(params, ppath, {"rate"});
            return potentials::make_exp(get_number(params, ppath, "rate", 1.0), d);
        }
        if (kind == "custom") {
            reject_unknown(params, ppath, {});
            const std::string table = get_string(j, path, "table", "", true);
            return potentials::make_custom(potentials::load_custom_table_csv(table, d),
                                           get_bool(j, path, "radial", false));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown potential kind '" + kind + "'");
}

}  // namespace

verify::VerifyOptions RunConfig::verify_options() const {
    verify::VerifyOptions opts;
    opts.grid = grid;
    opts.solver_tol = solver_tol;
    opts.envelopes = envelopes;
    opts.prefer_radial = prefer_radial;
    opts.run_conditions = checks.conditions;
    opts.condition_epsilon = condition_epsilon;
    opts.condition_delta = condition_delta;
    opts.condition_t_max = condition_t_max;
    opts.run_ratio_profile = checks.ratio_profile;
    opts.run_power_sharp = checks.power_sharp;
    return opts;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config error: top level must be an object");
    reject_unknown(j, "config",
                   {"potential", "grid", "solver", "envelopes", "conditions", "fk",
                    "resolvent", "exit_time", "dirichlet", "checks", "output_dir"});
    RunConfig cfg;
    if (!j.contains("potential")) throw ConfigError("config error: potential: missing");
    cfg.potential = parse_potential(j["potential"], "potential");

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        const std::string path = "grid";
        if (!g.is_object()) fail(path, "expected an object");
        reject_unknown(g, path, {"half_width", "points_per_axis"});
        cfg.grid.half_width = get_number(g, path, "half_width", 10.0);
        cfg.grid.points_per_axis = static_cast<int>(get_number(g, path, "points_per_axis", 2001));
        if (cfg.grid.half_width <= 0.0) fail("grid.half_width", "must be positive");
        if (cfg.grid.points_per_axis < 16) fail("grid.points_per_axis", "must be >= 16");
    }
    cfg.grid.dimension = cfg.potential.dimension;

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (!s.is_object()) fail("solver", "expected an object");
        reject_unknown(s, "solver", {"tolerance", "prefer_radial"});
        cfg.solver_tol = get_number(s, "solver", "tolerance", 1e-10);
        if (cfg.solver_tol <= 0.0) fail("solver.tolerance", "must be positive");
        cfg.prefer_radial = get_bool(s, "solver", "prefer_radial", true);
    }

    if (j.contains("envelopes")) {
        if (!j["envelopes"].is_array()) fail("envelopes", "expected an array");
        int i = 0;
        for (const auto& e : j["envelopes"]) {
            char path[64];
            std::snprintf(path, sizeof path, "envelopes[%d]", i++);
            if (!e.is_object()) fail(path, "expected an object");
            reject_unknown(e, path, {"side", "epsilon", "delta"});
            verify::EnvelopeSpec spec;
            const std::string side = get_string(e, path, "side", "", true);
            if (side == "lower")
                spec.side = verify::EnvelopeSpec::Side::Lower;
            else if (side == "upper")
                spec.side = verify::EnvelopeSpec::Side::Upper;
            else
                fail(std::string(path) + ".side", "must be 'lower' or 'upper'");
            spec.epsilon = get_number(e, path, "epsilon", 0.1);
            spec.delta = get_number(e, path, "delta", 0.5);
            if (spec.delta <= 0.0 || spec.delta >= 1.0)
                fail(std::string(path) + ".delta", "must lie in (0,1)");
            if (spec.epsilon <= 0.0 ||
                (spec.side == verify::EnvelopeSpec::Side::Upper && spec.epsilon >= 1.0))
                fail(std::string(path) + ".epsilon",
                     spec.side == verify::EnvelopeSpec::Side::Upper ? "must lie in (0,1)"
                                                                    : "must be positive");
            cfg.envelopes.push_back(spec);
        }
    }

    if (j.contains("conditions")) {
        const auto& c = j["conditions"];
        if (!c.is_object()) fail("conditions", "expected an object");
        reject_unknown(c, "conditions", {"epsilon", "delta", "t_max"});
        cfg.condition_epsilon = get_number(c, "conditions", "epsilon", 0.1);
        cfg.condition_delta = get_number(c, "conditions", "delta", 0.9);
        cfg.condition_t_max = get_number(c, "conditions", "t_max", 1e12);
        if (cfg.condition_epsilon <= 0.0 || cfg.condition_epsilon >= 1.0)
            fail("conditions.epsilon", "must lie in (0,1)");
        if (cfg.condition_delta <= 0.0 || cfg.condition_delta >= 1.0)
            fail("conditions.delta", "must lie in (0,1)");
    }

    if (j.contains("fk")) {
        const auto& f = j["fk"];
        if (!f.is_object()) fail("fk", "expected an object");
        reject_unknown(f, "fk",
                       {"paths", "steps", "seed", "scheme", "antithetic", "b", "plan",
                        "epsilon", "delta"});
        cfg.fk_cfg.paths = static_cast<int>(get_number(f, "fk", "paths", 20000));
        cfg.fk_cfg.steps = static_cast<int>(get_number(f, "fk", "steps", 100));
        cfg.fk_cfg.seed = static_cast<std::uint64_t>(get_number(f, "fk", "seed", 123456789.0));
        const std::string scheme = get_string(f, "fk", "scheme", "bridge");
        if (scheme == "bridge")
            cfg.fk_cfg.scheme = fk::PathSamplerConfig::Scheme::Bridge;
        else if (scheme == "forward")
            cfg.fk_cfg.scheme = fk::PathSamplerConfig::Scheme::Forward;
        else
            fail("fk.scheme", "must be 'bridge' or 'forward'");
        cfg.fk_cfg.antithetic = get_bool(f, "fk", "antithetic", true);
        cfg.fk_cfg.b = get_number(f, "fk", "b", 2.0);
        cfg.fk_epsilon = get_number(f, "fk", "epsilon", 0.5);
        cfg.fk_delta = get_number(f, "fk", "delta", 0.5);
        if (cfg.fk_cfg.paths < 100) fail("fk.paths", "must be >= 100");
        if (cfg.fk_cfg.steps < 10) fail("fk.steps", "must be >= 10");
        if (cfg.fk_cfg.b <= 1.0) fail("fk.b", "must exceed 1");
        if (cfg.fk_delta <= 0.0 || cfg.fk_delta >= 1.0) fail("fk.delta", "must lie in (0,1)");
        if (cfg.fk_epsilon <= 0.0 || cfg.fk_epsilon >= 1.0)
            fail("fk.epsilon", "must lie in (0,1)");
        if (f.contains("plan")) {
            if (!f["plan"].is_array()) fail("fk.plan", "expected an array");
            int i = 0;
            for (const auto& s : f["plan"]) {
                char path[64];
                std::snprintf(path, sizeof path, "fk.plan[%d]", i++);
                if (!s.is_object()) fail(path, "expected an object");
                reject_unknown(s, path, {"x", "y", "t"});
                fk::SandwichSample sample;
                sample.x = get_array(s, path, "x", {});
                sample.y = get_array(s, path, "y", {});
                sample.t = get_number(s, path, "t", 0.0, true);
                if (sample.t <= 0.0) fail(std::string(path) + ".t", "must be positive");
                if (static_cast<int>(sample.x.size()) != cfg.potential.dimension ||
                    static_cast<int>(sample.y.size()) != cfg.potential.dimension)
                    fail(path, "x and y must have the potential's dimension");
                cfg.fk_plan.push_back(std::move(sample));
            }
        }
    }

    if (j.contains("resolvent")) {
        const auto& r = j["resolvent"];
        if (!r.is_object()) fail("resolvent", "expected an object");
        reject_unknown(r, "resolvent", {"epsilon", "lambda_grid", "y_max"});
        cfg.resolvent_epsilon = get_number(r, "resolvent", "epsilon", 0.1);
        cfg.resolvent_lambda_grid =
            get_array(r, "resolvent", "lambda_grid", cfg.resolvent_lambda_grid);
        cfg.resolvent_y_max = get_number(r, "resolvent", "y_max", 10.0);
        if (cfg.resolvent_epsilon <= 0.0) fail("resolvent.epsilon", "must be positive");
        for (double l : cfg.resolvent_lambda_grid)
            if (l <= 0.0) fail("resolvent.lambda_grid", "entries must be positive");
    }

    if (j.contains("exit_time")) {
        const auto& e = j["exit_time"];
        if (!e.is_object()) fail("exit_time", "expected an object");
        reject_unknown(e, "exit_time", {"lambda_grid", "r_grid"});
        cfg.exit_lambda_grid = get_array(e, "exit_time", "lambda_grid", cfg.exit_lambda_grid);
        cfg.exit_r_grid = get_array(e, "exit_time", "r_grid", cfg.exit_r_grid);
        for (double l : cfg.exit_lambda_grid)
            if (l <= 0.0) fail("exit_time.lambda_grid", "entries must be positive");
        for (double r : cfg.exit_r_grid)
            if (r <= 0.0) fail("exit_time.r_grid", "entries must be positive");
    }

    if (j.contains("dirichlet")) {
        const auto& d = j["dirichlet"];
        if (!d.is_object()) fail("dirichlet", "expected an object");
        reject_unknown(d, "dirichlet", {"t_grid", "points", "min_c"});
        cfg.dirichlet_t_grid = get_array(d, "dirichlet", "t_grid", cfg.dirichlet_t_grid);
        cfg.dirichlet_points = get_array(d, "dirichlet", "points", cfg.dirichlet_points);
        cfg.dirichlet_min_c = get_number(d, "dirichlet", "min_c", 0.2);
        for (double t : cfg.dirichlet_t_grid)
            if (t <= 0.0) fail("dirichlet.t_grid", "entries must be positive");
        for (double p : cfg.dirichlet_points)
            if (std::abs(p) >= 1.0) fail("dirichlet.points", "entries must lie in (-1,1)");
    }

    if (j.contains("checks")) {
        const auto& c = j["checks"];
        if (!c.is_object()) fail("checks", "expected an object");
        reject_unknown(c, "checks",
                       {"envelope", "conditions", "ratio_profile", "power_sharp", "sandwich",
                        "resolvent", "exit_time", "dirichlet_bound"});
        cfg.checks.envelope = get_bool(c, "checks", "envelope", true);
        cfg.checks.conditions = get_bool(c, "checks", "conditions", true);
        cfg.checks.ratio_profile = get_bool(c, "checks", "ratio_profile", true);
        cfg.checks.power_sharp = get_bool(c, "checks", "power_sharp", true);
        cfg.checks.sandwich = get_bool(c, "checks", "sandwich", true);
        cfg.checks.resolvent = get_bool(c, "checks", "resolvent", true);
        cfg.checks.exit_time = get_bool(c, "checks", "exit_time", true);
        cfg.checks.dirichlet_bound = get_bool(c, "checks", "dirichlet_bound", true);
    }

    cfg.output_dir = get_string(j, "config", "output_dir", "out");

    // FNV-1a over the canonical (sorted-key) dump; nlohmann objects iterate
    // in sorted key order already.
    const std::string canonical = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    cfg.hash = h;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string hash_hex(std::uint64_t hash) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace gsd::config

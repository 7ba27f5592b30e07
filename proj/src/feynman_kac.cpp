#include "gsdecay/feynman_kac.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "gsdecay/kernels.hpp"

namespace gsd::fk {

namespace {

constexpr int kMaxDim = 8;

std::uint64_t fnv64(const void* data, std::size_t bytes, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t batch, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long long count = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    double mean() const { return sum / count; }
    double stderr_of_mean() const {
        if (count < 2) return std::numeric_limits<double>::infinity();
        const double m = mean();
        const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
        return std::sqrt(var / count);
    }
};

struct RatioEstimate {
    double mean = 0.0;
    double se = 0.0;
};

// One bridge-scheme pass at a fixed midpoint resolution: returns the Monte
// Carlo average of exp(-int_0^t V(Z_s) ds) over pinned bridges.
RatioEstimate bridge_ratio_once(const potentials::PotentialSpec& potential, double t,
                                std::span<const double> x, std::span<const double> y,
                                const PathSamplerConfig& cfg, int m) {
    const int d = potential.dimension;
    const double dt = t / m;
    // Bridge mean path at the midpoint times, shared by every sample.
    std::vector<double> base(static_cast<std::size_t>(m) * d);
    std::vector<double> s_over_t(m);
    for (int j = 0; j < m; ++j) {
        const double s = (j + 0.5) * dt;
        s_over_t[j] = s / t;
        for (int a = 0; a < d; ++a)
            base[static_cast<std::size_t>(j) * d + a] = x[a] + s_over_t[j] * (y[a] - x[a]);
    }
    const double sqrt2 = std::numbers::sqrt2;
    const int pair_factor = cfg.antithetic ? 2 : 1;
    const long long units = std::max(1, cfg.paths / pair_factor);
    std::vector<double> w(static_cast<std::size_t>(m) * d);
    double z[kMaxDim];
    Accumulator acc;
    std::normal_distribution<double> gauss(0.0, 1.0);
    const long long per_batch = std::max(1, cfg.batch);
    for (long long done = 0; done < units;) {
        const long long batch_index = done / per_batch;
        auto rng = stream_for(cfg.seed, batch_index, 0x6272u /* bridge */ + m);
        const long long upto = std::min(units, (batch_index + 1) * per_batch);
        for (; done < upto; ++done) {
            // Brownian path at the midpoints plus the terminal point.
            for (int a = 0; a < d; ++a) {
                double wcur = 0.0;
                for (int j = 0; j < m; ++j) {
                    const double var = (j == 0) ? 0.5 * dt : dt;
                    wcur += std::sqrt(var) * gauss(rng);
                    w[static_cast<std::size_t>(j) * d + a] = wcur;
                }
                const double wt = wcur + std::sqrt(0.5 * dt) * gauss(rng);
                // Replace stored W by the bridge fluctuation W_s - (s/t) W_t.
                for (int j = 0; j < m; ++j)
                    w[static_cast<std::size_t>(j) * d + a] -= s_over_t[j] * wt;
            }
            double integral_plus = 0.0, integral_minus = 0.0;
            for (int j = 0; j < m; ++j) {
                const double* b = &base[static_cast<std::size_t>(j) * d];
                const double* f = &w[static_cast<std::size_t>(j) * d];
                for (int a = 0; a < d; ++a) z[a] = b[a] + sqrt2 * f[a];
                integral_plus += potential(std::span<const double>(z, d));
                if (cfg.antithetic) {
                    for (int a = 0; a < d; ++a) z[a] = b[a] - sqrt2 * f[a];
                    integral_minus += potential(std::span<const double>(z, d));
                }
            }
            const double vp = std::exp(-dt * integral_plus);
            acc.add(cfg.antithetic ? 0.5 * (vp + std::exp(-dt * integral_minus)) : vp);
        }
    }
    return {acc.mean(), acc.stderr_of_mean()};
}

}  // namespace

void PathSamplerConfig::validate() const {
    if (paths < 100) throw std::invalid_argument("path sampler: need at least 100 paths");
    if (steps < 10) throw std::invalid_argument("path sampler: need at least 10 steps");
    if (b <= 1.0) throw std::invalid_argument("path sampler: b must exceed 1");
}

KernelEstimate fk_kernel_estimate(const potentials::PotentialSpec& potential, double t,
                                  std::span<const double> x, std::span<const double> y,
                                  const PathSamplerConfig& cfg) {
    if (t <= 0.0) throw std::invalid_argument("fk_kernel_estimate: t must be positive");
    cfg.validate();
    const int d = potential.dimension;
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        throw std::invalid_argument("fk_kernel_estimate: dimension mismatch");
    if (d > kMaxDim) throw std::invalid_argument("fk_kernel_estimate: dimension too large");
    if (cfg.scheme == PathSamplerConfig::Scheme::Forward) {
        // Forward simulation with one-step analytic smoothing onto y; biased
        // at O(t/m), kept as a cross-check scheme. Bridge is the default.
        const double dt = t / cfg.steps;
        const double t_free = t - dt;
        auto smoothing = [&](std::span<const double> z) {
            return kernels::gauss_kernel(dt, z, y, d);
        };
        PathSamplerConfig sub = cfg;
        sub.max_step_doublings = 0;
        MeanEstimate fwd = fk_semigroup_apply(potential, smoothing, t_free, x, sub);
        KernelEstimate out;
        out.t = t;
        out.x.assign(x.begin(), x.end());
        out.y.assign(y.begin(), y.end());
        out.mean = fwd.mean;
        out.stderr_ = fwd.stderr_;
        const double free = kernels::gauss_kernel(t, x, y, d);
        out.ratio_to_free = out.mean / free;
        out.ratio_stderr = out.stderr_ / free;
        out.paths = cfg.paths;
        out.steps_used = cfg.steps;
        out.low_precision = out.mean > 0.0 && out.stderr_ / out.mean > 0.5;
        return out;
    }

    int m = cfg.steps;
    RatioEstimate cur = bridge_ratio_once(potential, t, x, y, cfg, m);
    bool converged = cfg.max_step_doublings == 0;
    for (int k = 0; k < cfg.max_step_doublings; ++k) {
        RatioEstimate fine = bridge_ratio_once(potential, t, x, y, cfg, 2 * m);
        const double shift = std::abs(fine.mean - cur.mean);
        const double budget = std::sqrt(cur.se * cur.se + fine.se * fine.se);
        m *= 2;
        cur = fine;
        if (shift <= std::max(budget, 1e-15)) {
            converged = true;
            break;
        }
    }
    const double free = kernels::gauss_kernel(t, x, y, d);
    KernelEstimate out;
    out.t = t;
    out.x.assign(x.begin(), x.end());
    out.y.assign(y.begin(), y.end());
    out.ratio_to_free = cur.mean;
    out.ratio_stderr = cur.se;
    out.mean = cur.mean * free;
    out.stderr_ = cur.se * free;
    out.paths = cfg.paths;
    out.steps_used = m;
    out.bias_converged = converged;
    out.low_precision = out.mean > 0.0 && out.stderr_ / out.mean > 0.5;
    return out;
}

MeanEstimate fk_semigroup_apply(const potentials::PotentialSpec& potential,
                                const std::function<double(std::span<const double>)>& f,
                                double t, std::span<const double> x,
                                const PathSamplerConfig& cfg) {
    if (t <= 0.0) throw std::invalid_argument("fk_semigroup_apply: t must be positive");
    cfg.validate();
    const int d = potential.dimension;
    if (d > kMaxDim) throw std::invalid_argument("fk_semigroup_apply: dimension too large");
    const int m = cfg.steps;
    const double dt = t / m;
    const int pair_factor = cfg.antithetic ? 2 : 1;
    const long long units = std::max(1, cfg.paths / pair_factor);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Accumulator acc;
    // Increments at midpoint spacing: half step, m-1 full steps, half step.
    std::vector<double> incr(static_cast<std::size_t>(m + 1) * d);
    double zp[kMaxDim], zm[kMaxDim];
    const long long per_batch = std::max(1, cfg.batch);
    for (long long done = 0; done < units;) {
        const long long batch_index = done / per_batch;
        auto rng = stream_for(cfg.seed, batch_index, 0x666f /* forward */ + m);
        const long long upto = std::min(units, (batch_index + 1) * per_batch);
        for (; done < upto; ++done) {
            for (int j = 0; j <= m; ++j) {
                const double var = 2.0 * ((j == 0 || j == m) ? 0.5 * dt : dt);
                for (int a = 0; a < d; ++a)
                    incr[static_cast<std::size_t>(j) * d + a] = std::sqrt(var) * gauss(rng);
            }
            double ip = 0.0, im = 0.0;
            for (int a = 0; a < d; ++a) {
                zp[a] = x[a];
                zm[a] = x[a];
            }
            for (int j = 0; j < m; ++j) {
                for (int a = 0; a < d; ++a) {
                    zp[a] += incr[static_cast<std::size_t>(j) * d + a];
                    zm[a] -= incr[static_cast<std::size_t>(j) * d + a];
                }
                ip += potential(std::span<const double>(zp, d));
                if (cfg.antithetic) im += potential(std::span<const double>(zm, d));
            }
            for (int a = 0; a < d; ++a) {
                zp[a] += incr[static_cast<std::size_t>(m) * d + a];
                zm[a] -= incr[static_cast<std::size_t>(m) * d + a];
            }
            const double vp = std::exp(-dt * ip) * f(std::span<const double>(zp, d));
            if (cfg.antithetic) {
                const double vm = std::exp(-dt * im) * f(std::span<const double>(zm, d));
                acc.add(0.5 * (vp + vm));
            } else {
                acc.add(vp);
            }
        }
    }
    return {acc.mean(), acc.stderr_of_mean(), true};
}

namespace {

// Negating every increment reflects the whole path, which leaves |X|
// unchanged, so antithetic pairing is a no-op for exit times; plain
// independent paths are used regardless of cfg.antithetic.
MeanEstimate exit_time_once(double lambda, double r, int d, const PathSamplerConfig& cfg,
                            double h, std::uint64_t salt) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double tau_cap = 42.0 / lambda;  // exp(-42) is below double noise here
    const double step_sd = std::sqrt(2.0 * h);
    const long long units = cfg.paths;
    Accumulator acc;
    double xcur[kMaxDim], xnew[kMaxDim];
    const long long per_batch = std::max(1, cfg.batch);
    for (long long done = 0; done < units;) {
        const long long batch_index = done / per_batch;
        auto rng = stream_for(cfg.seed, batch_index, salt);
        const long long upto = std::min(units, (batch_index + 1) * per_batch);
        for (; done < upto; ++done) {
            for (int a = 0; a < d; ++a) xcur[a] = 0.0;
            double nx = 0.0;
            double tau = 0.0;
            double value = 0.0;
            while (true) {
                double n2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    xnew[a] = xcur[a] + step_sd * gauss(rng);
                    n2 += xnew[a] * xnew[a];
                }
                const double nnew = std::sqrt(n2);
                if (nnew >= r) {
                    value = std::exp(-lambda * (tau + 0.5 * h));
                    break;
                }
                // Brownian-bridge probability of touching the sphere inside
                // the step (radial half-space approximation). Steps with a
                // crossing probability under ~1e-18 skip the test entirely.
                const double crossing_exponent = (r - nx) * (r - nnew) / h;
                if (crossing_exponent < 41.0 &&
                    unif(rng) < std::exp(-crossing_exponent)) {
                    value = std::exp(-lambda * (tau + 0.5 * h));
                    break;
                }
                for (int a = 0; a < d; ++a) xcur[a] = xnew[a];
                nx = nnew;
                tau += h;
                if (tau > tau_cap) break;  // survivor tail below resolution
            }
            acc.add(value);
        }
    }
    return {acc.mean(), acc.stderr_of_mean(), true};
}

}  // namespace

MeanEstimate exit_time_laplace(double lambda, double r, int d, const PathSamplerConfig& cfg) {
    if (lambda <= 0.0 || r <= 0.0)
        throw std::invalid_argument("exit_time_laplace: lambda and r must be positive");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("exit_time_laplace: bad dimension");
    cfg.validate();
    double h = std::min(r * r, 1.0 / lambda) / cfg.steps;
    // Salt the streams with (lambda, r): the step rule is scale-invariant, so
    // otherwise scaled problems replay identical trajectories.
    std::uint64_t salt = 0xe217;
    salt = fnv64(&lambda, sizeof lambda, salt);
    salt = fnv64(&r, sizeof r, salt);
    // Halve the step until the estimate settles within two combined standard
    // errors; the flag reports the outcome of the last comparison.
    MeanEstimate coarse = exit_time_once(lambda, r, d, cfg, h, salt);
    MeanEstimate fine = coarse;
    const int rounds = std::max(1, cfg.max_step_doublings + 1);
    bool converged = false;
    for (int k = 0; k < rounds && !converged; ++k) {
        fine = exit_time_once(lambda, r, d, cfg, 0.5 * h, salt ^ (k + 1));
        const double shift = std::abs(coarse.mean - fine.mean);
        const double budget = 2.0 * std::sqrt(coarse.stderr_ * coarse.stderr_ +
                                              fine.stderr_ * fine.stderr_);
        converged = shift <= budget;
        h *= 0.5;
        coarse = fine;
    }
    fine.bias_converged = converged;
    return fine;
}

namespace {

KernelEstimator mc_estimator(const potentials::PotentialSpec& potential,
                             const PathSamplerConfig& cfg) {
    return [&potential, cfg](const SandwichSample& s) {
        PathSamplerConfig local = cfg;
        // Decorrelate samples while keeping the whole plan reproducible.
        std::uint64_t h = fnv64(&s.t, sizeof s.t, cfg.seed ^ 1469598103934665603ULL);
        h = fnv64(s.x.data(), s.x.size() * sizeof(double), h);
        h = fnv64(s.y.data(), s.y.size() * sizeof(double), h);
        local.seed = h;
        return fk_kernel_estimate(potential, s.t, s.x, s.y, local);
    };
}

KernelEstimator half_paths_estimator(const potentials::PotentialSpec& potential,
                                     const PathSamplerConfig& cfg) {
    PathSamplerConfig half = cfg;
    half.paths = std::max(100, cfg.paths / 2);
    half.seed = cfg.seed ^ 0x5deece66dULL;
    return mc_estimator(potential, half);
}

struct FitOutcome {
    double constant = 0.0;
    double se = 0.0;
};

FitOutcome fit_extreme(const std::vector<SandwichSampleResult>& rows, bool take_min) {
    FitOutcome fit;
    fit.constant = take_min ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        const bool better = take_min ? r.ratio < fit.constant : r.ratio > fit.constant;
        if (better) {
            fit.constant = r.ratio;
            fit.se = r.ratio_stderr;
        }
    }
    return fit;
}

}  // namespace

double lower_sandwich_min_radius(const potentials::PotentialSpec& potential, double epsilon,
                                 double delta, double r_max) {
    if (epsilon <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("lower sandwich: epsilon and delta must be positive");
    const double mu0 = kernels::principal_dirichlet_eigenvalue(potential.dimension);
    Point probe(potential.dimension, 0.0);
    for (double radius = 2.0; radius <= r_max; radius += 0.25) {
        probe[0] = radius;
        const double vsup = potentials::profile_sup(potential, probe, delta).value;
        if (mu0 / ((radius + delta) * (radius + delta)) + 1.0 / (delta * delta) <=
            epsilon * vsup)
            return radius;
    }
    throw std::invalid_argument(
        "lower sandwich: admission inequality not satisfied up to r_max");
}

SandwichCheckResult check_lower_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const KernelEstimator& estimate) {
    SandwichCheckResult out;
    out.side = SandwichCheckResult::Side::Lower;
    out.epsilon = epsilon;
    out.delta = delta;
    out.rho1 = lower_sandwich_min_radius(potential, epsilon, delta);
    for (const auto& s : samples) {
        char reason[160];
        if (norm(s.y) >= 1.0) {
            std::snprintf(reason, sizeof reason, "sample t=%g: y must lie in B_1(0)", s.t);
            out.rejected.emplace_back(reason);
            continue;
        }
        if (norm(s.x) < out.rho1) {
            std::snprintf(reason, sizeof reason,
                          "sample t=%g: |x|=%g below admission radius rho1=%g", s.t,
                          norm(s.x), out.rho1);
            out.rejected.emplace_back(reason);
            continue;
        }
        KernelEstimate est = estimate(s);
        SandwichSampleResult row;
        row.sample = s;
        row.estimate = est.mean;
        row.estimate_stderr = est.stderr_;
        row.profile_value = potentials::profile_sup(potential, s.x, delta).value;
        const double free = kernels::gauss_kernel(s.t, s.x, s.y, potential.dimension);
        row.envelope = std::exp(-(1.0 + epsilon) * row.profile_value * s.t) * free;
        row.ratio = row.estimate / row.envelope;
        row.ratio_stderr = row.estimate_stderr / row.envelope;
        // Domination breach u_t > g_t beyond budget is a Monte Carlo defect.
        if (row.estimate - out.stderr_budget * row.estimate_stderr > free)
            out.violations.push_back(out.samples.size());
        out.samples.push_back(std::move(row));
    }
    if (out.samples.empty())
        throw std::invalid_argument("lower sandwich: no admissible samples");
    const FitOutcome fit = fit_extreme(out.samples, /*take_min=*/true);
    out.fitted_constant = fit.constant;
    out.fitted_stderr = fit.se;
    out.pass = out.fitted_constant - out.stderr_budget * out.fitted_stderr > 0.0 &&
               out.violations.empty();
    return out;
}

SandwichCheckResult check_lower_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const PathSamplerConfig& cfg) {
    SandwichCheckResult out =
        check_lower_sandwich(potential, epsilon, delta, samples, mc_estimator(potential, cfg));
    SandwichCheckResult half = check_lower_sandwich(potential, epsilon, delta, samples,
                                                    half_paths_estimator(potential, cfg));
    const double lo = std::min(out.fitted_constant, half.fitted_constant);
    const double hi = std::max(out.fitted_constant, half.fitted_constant);
    out.stable = lo > 0.0 && hi / lo <= 2.0;
    out.pass = out.pass && out.stable;
    return out;
}

SandwichCheckResult check_upper_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const KernelEstimator& estimate, double b) {
    if (b <= 1.0) throw std::invalid_argument("upper sandwich: b must exceed 1");
    if ((1.0 - epsilon) * std::sqrt(b) >= 1.0)
        throw std::invalid_argument("upper sandwich: need (1-eps)*sqrt(b) < 1");
    SandwichCheckResult out;
    out.side = SandwichCheckResult::Side::Upper;
    out.epsilon = epsilon;
    out.delta = delta;
    out.a = b / (b - 1.0);
    for (const auto& s : samples) {
        if (norm(s.x) == 0.0) {
            char reason[96];
            std::snprintf(reason, sizeof reason, "sample t=%g: x must be nonzero", s.t);
            out.rejected.emplace_back(reason);
            continue;
        }
        KernelEstimate est = estimate(s);
        SandwichSampleResult row;
        row.sample = s;
        row.estimate = est.mean;
        row.estimate_stderr = est.stderr_;
        row.profile_value = potentials::profile_inf(potential, s.x, delta).value;
        const double exponent =
            std::min(row.profile_value * s.t / out.a,
                     (1.0 - epsilon) * delta * std::sqrt(row.profile_value) * norm(s.x));
        row.envelope = std::exp(-exponent) *
                       kernels::gauss_kernel(out.a * s.t, s.x, s.y, potential.dimension);
        row.ratio = row.estimate / row.envelope;
        row.ratio_stderr = row.estimate_stderr / row.envelope;
        const double free = kernels::gauss_kernel(s.t, s.x, s.y, potential.dimension);
        if (row.estimate - out.stderr_budget * row.estimate_stderr > free)
            out.violations.push_back(out.samples.size());
        out.samples.push_back(std::move(row));
    }
    if (out.samples.empty())
        throw std::invalid_argument("upper sandwich: no admissible samples");
    const FitOutcome fit = fit_extreme(out.samples, /*take_min=*/false);
    out.fitted_constant = fit.constant;
    out.fitted_stderr = fit.se;
    out.pass = std::isfinite(out.fitted_constant) && out.violations.empty();
    return out;
}

SandwichCheckResult check_upper_sandwich(const potentials::PotentialSpec& potential,
                                         double epsilon, double delta,
                                         const std::vector<SandwichSample>& samples,
                                         const PathSamplerConfig& cfg) {
    SandwichCheckResult out = check_upper_sandwich(potential, epsilon, delta, samples,
                                                   mc_estimator(potential, cfg), cfg.b);
    SandwichCheckResult half = check_upper_sandwich(potential, epsilon, delta, samples,
                                                    half_paths_estimator(potential, cfg), cfg.b);
    const double lo = std::min(out.fitted_constant, half.fitted_constant);
    const double hi = std::max(out.fitted_constant, half.fitted_constant);
    out.stable = lo > 0.0 && hi / lo <= 2.0;
    out.pass = out.pass && out.stable;
    return out;
}

void write_sandwich_csv(const SandwichCheckResult& result, const std::string& path,
                        const std::vector<std::string>& extra_header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& line : extra_header) os << "# " << line << "\n";
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "# side=%s epsilon=%.17g delta=%.17g fitted_constant=%.17g "
                  "fitted_stderr=%.17g pass=%d stable=%d violations=%zu rejected=%zu",
                  result.side == SandwichCheckResult::Side::Lower ? "lower" : "upper",
                  result.epsilon, result.delta, result.fitted_constant, result.fitted_stderr,
                  result.pass ? 1 : 0, result.stable ? 1 : 0, result.violations.size(),
                  result.rejected.size());
    os << buf << "\n";
    for (const auto& r : result.rejected) os << "# rejected: " << r << "\n";
    os << "t,|x|,|y|,estimate,estimate_stderr,profile,envelope,ratio,ratio_stderr\n";
    for (const auto& r : result.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.sample.t, norm(r.sample.x), norm(r.sample.y), r.estimate,
                      r.estimate_stderr, r.profile_value, r.envelope, r.ratio, r.ratio_stderr);
        os << buf;
    }
}

}  // namespace gsd::fk

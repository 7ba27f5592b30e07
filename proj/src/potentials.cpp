#include "gsdecay/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gsd::potentials {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

double CustomTable::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension)
        throw std::invalid_argument("custom table: dimension mismatch");
    // Locate the cell along each axis; reject points outside the box.
    std::vector<int> lo(dimension);
    std::vector<double> frac(dimension);
    for (int a = 0; a < dimension; ++a) {
        const auto& ax = axes[a];
        if (x[a] < ax.front() - 1e-12 || x[a] > ax.back() + 1e-12)
            throw std::domain_error("custom table: point outside tabulated box");
        const double xa = std::clamp(x[a], ax.front(), ax.back());
        auto it = std::upper_bound(ax.begin(), ax.end(), xa);
        int hi = std::clamp<int>(static_cast<int>(it - ax.begin()), 1,
                                 static_cast<int>(ax.size()) - 1);
        lo[a] = hi - 1;
        frac[a] = (xa - ax[lo[a]]) / (ax[hi] - ax[lo[a]]);
    }
    // Multilinear blend over the 2^d cell corners.
    double value = 0.0;
    const int corners = 1 << dimension;
    for (int m = 0; m < corners; ++m) {
        double w = 1.0;
        std::size_t index = 0;
        for (int a = 0; a < dimension; ++a) {
            const int up = (m >> a) & 1;
            w *= up ? frac[a] : 1.0 - frac[a];
            index = index * axes[a].size() + (lo[a] + up);
        }
        value += w * values[index];
    }
    return value;
}

double CustomTable::box_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& ax : axes) r = std::min({r, -ax.front(), ax.back()});
    return std::max(0.0, r);
}

namespace {

// x^e with fast paths for the exponents the catalog actually uses in hot
// Monte Carlo loops.
inline double pow_fast(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 0.5) return std::sqrt(x);
    return std::pow(x, e);
}

}  // namespace

double PotentialSpec::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension)
        throw std::invalid_argument("potential: dimension mismatch");
    switch (kind) {
        case Kind::Power:
            return pow_fast(norm_sq(x), p[0]);
        case Kind::AffinePower:
            return p[0] * pow_fast(norm(x), p[2]) + p[1];
        case Kind::Log:
            return std::log(std::numbers::e + norm_sq(x));
        case Kind::AnisotropicQuadratic: {
            double s = 0.0;
            for (int i = 0; i < dimension; ++i) s += aniso[i] * x[i] * x[i];
            return s;
        }
        case Kind::ConstantPlus:
            return p[0];
        case Kind::Exp:
            return std::exp(p[0] * norm(x));
        case Kind::Custom:
            return table->eval(x);
    }
    throw std::logic_error("potential: unknown kind");
}

double PotentialSpec::radial_profile(double r) const {
    if (!radial) throw std::invalid_argument("potential: no radial profile for this kind");
    if (r < 0.0) throw std::invalid_argument("radial profile: r must be nonnegative");
    switch (kind) {
        case Kind::Power:
            return pow_fast(r * r, p[0]);
        case Kind::AffinePower:
            return p[0] * pow_fast(r, p[2]) + p[1];
        case Kind::Log:
            return std::log(std::numbers::e + r * r);
        case Kind::ConstantPlus:
            return p[0];
        case Kind::Exp:
            return std::exp(p[0] * r);
        case Kind::Custom: {
            Point x(dimension, 0.0);
            x[0] = r;
            return table->eval(x);
        }
        default:
            throw std::invalid_argument("potential: no radial profile for this kind");
    }
}

bool PotentialSpec::radial_nondecreasing() const {
    switch (kind) {
        case Kind::Power:
            return p[0] > 0.0;
        case Kind::AffinePower:
            return p[0] >= 0.0 && p[2] > 0.0;
        case Kind::Log:
        case Kind::ConstantPlus:
            return true;
        case Kind::Exp:
            return p[0] > 0.0;
        default:
            return false;
    }
}

std::string PotentialSpec::id() const {
    switch (kind) {
        case Kind::Power:
            return "power-b" + fmt(p[0]) + "-d" + std::to_string(dimension);
        case Kind::AffinePower:
            return "affine-a" + fmt(p[0]) + "-b" + fmt(p[1]) + "-al" + fmt(p[2]) + "-d" +
                   std::to_string(dimension);
        case Kind::Log:
            return "log-d" + std::to_string(dimension);
        case Kind::AnisotropicQuadratic: {
            std::string s = "aniso";
            for (double a : aniso) s += "-" + fmt(a);
            return s;
        }
        case Kind::ConstantPlus:
            return "const-" + fmt(p[0]) + "-d" + std::to_string(dimension);
        case Kind::Exp:
            return "exp-r" + fmt(p[0]) + "-d" + std::to_string(dimension);
        case Kind::Custom:
            return "custom-d" + std::to_string(dimension);
    }
    return "unknown";
}

PotentialSpec make_power(double beta, int d) {
    if (beta <= 0.0) throw std::invalid_argument("power potential: beta must be positive");
    PotentialSpec s;
    s.kind = Kind::Power;
    s.dimension = d;
    s.radial = true;
    s.confining = true;
    s.p = {beta};
    return s;
}

PotentialSpec make_affine_power(double a, double b, double alpha, int d) {
    if (a < 0.0 || b < 0.0 || alpha <= 0.0)
        throw std::invalid_argument("affine-power potential: need a,b >= 0 and alpha > 0");
    PotentialSpec s;
    s.kind = Kind::AffinePower;
    s.dimension = d;
    s.radial = true;
    s.confining = a > 0.0;
    s.p = {a, b, alpha};
    return s;
}

PotentialSpec make_log(int d) {
    PotentialSpec s;
    s.kind = Kind::Log;
    s.dimension = d;
    s.radial = true;
    s.confining = true;
    return s;
}

PotentialSpec make_aniso_quadratic(std::vector<double> coeffs) {
    for (double a : coeffs)
        if (a <= 0.0)
            throw std::invalid_argument("anisotropic potential: coefficients must be positive");
    PotentialSpec s;
    s.kind = Kind::AnisotropicQuadratic;
    s.dimension = static_cast<int>(coeffs.size());
    s.radial = false;
    s.confining = true;
    s.aniso = std::move(coeffs);
    return s;
}

PotentialSpec make_constant(double c, int d) {
    if (c < 0.0) throw std::invalid_argument("constant potential: c must be nonnegative");
    PotentialSpec s;
    s.kind = Kind::ConstantPlus;
    s.dimension = d;
    s.radial = true;
    s.confining = false;
    s.p = {c};
    return s;
}

PotentialSpec make_exp(double rate, int d) {
    if (rate <= 0.0) throw std::invalid_argument("exp potential: rate must be positive");
    PotentialSpec s;
    s.kind = Kind::Exp;
    s.dimension = d;
    s.radial = true;
    s.confining = true;
    s.p = {rate};
    return s;
}

PotentialSpec make_custom(std::shared_ptr<const CustomTable> table, bool radial) {
    PotentialSpec s;
    s.kind = Kind::Custom;
    s.dimension = table->dimension;
    s.radial = radial;
    s.confining = true;  // validated against the table on the solve path
    s.table = std::move(table);
    return s;
}

std::shared_ptr<const CustomTable> load_custom_table_csv(const std::string& path,
                                                         int dimension) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("custom table: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != dimension + 1)
            throw std::invalid_argument("custom table: expected " +
                                        std::to_string(dimension + 1) + " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("custom table: no data rows");
    auto table = std::make_shared<CustomTable>();
    table->dimension = dimension;
    table->axes.resize(dimension);
    for (int a = 0; a < dimension; ++a) {
        std::set<double> vals;
        for (const auto& r : rows) vals.insert(r[a]);
        table->axes[a].assign(vals.begin(), vals.end());
        if (table->axes[a].size() < 2)
            throw std::invalid_argument("custom table: need at least 2 points per axis");
    }
    std::size_t total = 1;
    for (const auto& ax : table->axes) total *= ax.size();
    if (rows.size() != total)
        throw std::invalid_argument("custom table: rows do not form a full lattice");
    table->values.assign(total, std::numeric_limits<double>::quiet_NaN());
    for (const auto& r : rows) {
        std::size_t index = 0;
        for (int a = 0; a < dimension; ++a) {
            const auto& ax = table->axes[a];
            const auto it = std::lower_bound(ax.begin(), ax.end(), r[a]);
            index = index * ax.size() + static_cast<std::size_t>(it - ax.begin());
        }
        if (r[dimension] < 0.0)
            throw std::invalid_argument("custom table: potential values must be nonnegative");
        table->values[index] = r[dimension];
    }
    for (double v : table->values)
        if (std::isnan(v))
            throw std::invalid_argument("custom table: duplicate or missing lattice rows");
    return table;
}

double eval_potential(const PotentialSpec& spec, std::span<const double> x) {
    return spec(x);
}

namespace {

// Compass search within { |z| <= R } (center 0) or { |z - c| <= R } in
// general; the feasibility projection keeps iterates inside.
template <typename Proj>
void compass_refine(const PotentialSpec& spec, Point& best, double& best_val,
                    double step, bool maximize, const Proj& project) {
    const int d = static_cast<int>(best.size());
    Point trial = best;
    while (step > 1e-10) {
        bool improved = false;
        for (int a = 0; a < d; ++a) {
            for (double sgn : {+1.0, -1.0}) {
                trial = best;
                trial[a] += sgn * step;
                project(trial);
                const double v = spec(trial);
                if (maximize ? v > best_val : v < best_val) {
                    best = trial;
                    best_val = v;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
}

double gradient_norm_estimate(const PotentialSpec& spec, const Point& at, double h) {
    const int d = static_cast<int>(at.size());
    double s = 0.0;
    Point a = at, b = at;
    for (int i = 0; i < d; ++i) {
        a[i] = at[i] - h;
        b[i] = at[i] + h;
        double va, vb;
        try {
            va = spec(a);
            vb = spec(b);
        } catch (const std::domain_error&) {
            a[i] = at[i];
            b[i] = at[i];
            continue;  // at the custom-table box edge; one-sided info only
        }
        const double g = (vb - va) / (2.0 * h);
        s += g * g;
        a[i] = at[i];
        b[i] = at[i];
    }
    return std::sqrt(s);
}

}  // namespace

ProfilePoint profile_sup(const PotentialSpec& spec, std::span<const double> x,
                         double delta, int scan_per_axis) {
    if (static_cast<int>(x.size()) != spec.dimension)
        throw std::invalid_argument("profile_sup: dimension mismatch");
    if (delta <= 0.0) throw std::invalid_argument("profile_sup: delta must be positive");
    const double radius = norm(x) + delta;
    ProfilePoint out;
    out.x.assign(x.begin(), x.end());
    out.delta = delta;
    if (spec.radial && spec.radial_nondecreasing()) {
        out.value = spec.radial_profile(radius);
        out.extremizer = Point(spec.dimension, 0.0);
        out.extremizer[0] = radius;
        out.tolerance = 0.0;
        return out;
    }
    const int d = spec.dimension;
    const auto project = [&](Point& z) {
        const double n = norm(z);
        if (n > radius)
            for (double& c : z) c *= radius / n;
    };
    // Coarse lattice over the bounding cube; points outside the ball are
    // projected onto the sphere so boundary extrema are seen.
    const int m = std::max(5, scan_per_axis);
    const double h = 2.0 * radius / (m - 1);
    Point best(d, 0.0);
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(d, 0);
    while (true) {
        Point z(d);
        for (int a = 0; a < d; ++a) z[a] = -radius + idx[a] * h;
        project(z);
        const double v = spec(z);  // domain_error propagates for bad tables
        if (v > best_val) {
            best_val = v;
            best = z;
        }
        int a = 0;
        for (; a < d; ++a) {
            if (++idx[a] < m) break;
            idx[a] = 0;
        }
        if (a == d) break;
    }
    compass_refine(spec, best, best_val, h, /*maximize=*/true, project);
    out.value = best_val;
    out.extremizer = best;
    out.tolerance = h * gradient_norm_estimate(spec, best, std::min(1e-4, h));
    return out;
}

ProfilePoint profile_inf(const PotentialSpec& spec, std::span<const double> x,
                         double delta, int scan_per_axis) {
    if (static_cast<int>(x.size()) != spec.dimension)
        throw std::invalid_argument("profile_inf: dimension mismatch");
    const double nx = norm(x);
    if (nx == 0.0) throw std::invalid_argument("profile_inf: x must be nonzero");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("profile_inf: delta must lie in (0,1)");
    ProfilePoint out;
    out.x.assign(x.begin(), x.end());
    out.delta = delta;
    const double radius = delta * nx;
    if (spec.radial && spec.radial_nondecreasing()) {
        out.value = spec.radial_profile((1.0 - delta) * nx);
        out.extremizer = scaled(x, 1.0 - delta);
        out.tolerance = 0.0;
        return out;
    }
    const int d = spec.dimension;
    // Stay strictly inside the open ball.
    const double reach = radius * (1.0 - 1e-12);
    const auto project = [&](Point& z) {
        double n2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double c = z[a] - x[a];
            n2 += c * c;
        }
        const double n = std::sqrt(n2);
        if (n > reach)
            for (int a = 0; a < d; ++a) z[a] = x[a] + (z[a] - x[a]) * reach / n;
    };
    const int m = std::max(5, scan_per_axis);
    const double h = 2.0 * radius / (m - 1);
    Point best(x.begin(), x.end());
    double best_val = spec(best);
    std::vector<int> idx(d, 0);
    while (true) {
        Point z(d);
        for (int a = 0; a < d; ++a) z[a] = x[a] - radius + idx[a] * h;
        project(z);
        const double v = spec(z);
        if (v < best_val) {
            best_val = v;
            best = z;
        }
        int a = 0;
        for (; a < d; ++a) {
            if (++idx[a] < m) break;
            idx[a] = 0;
        }
        if (a == d) break;
    }
    compass_refine(spec, best, best_val, h, /*maximize=*/false, project);
    out.value = best_val;
    out.extremizer = best;
    out.tolerance = h * gradient_norm_estimate(spec, best, std::min(1e-4, h));
    return out;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> t(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        t[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return t;
}

void validate_profile_window(const std::function<double(double)>& g,
                             const std::vector<double>& t) {
    double prev = g(t.front());
    double scale = std::abs(prev);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double cur = g(t[i]);
        scale = std::max(scale, std::abs(cur));
        if (cur < prev - 1e-9 * std::max(1.0, scale))
            throw std::invalid_argument("condition check: profile not nondecreasing");
        prev = cur;
    }
    if (g(t.back()) <= g(t.front()) + 1e-9)
        throw std::invalid_argument("condition check: profile does not grow on the window");
}

// Index of the start of the longest suffix of the t-grid on which pred holds;
// t.size() when it fails even at the last sample.
template <typename Pred>
std::size_t holding_suffix(const std::vector<double>& t, const Pred& pred) {
    std::size_t k = t.size();
    while (k > 0 && pred(t[k - 1])) --k;
    return k;
}

constexpr double kRelSlack = 1e-12;  // absorbs ulp noise at exact-equality thresholds

}  // namespace

ConditionCheck check_condition_I(const std::function<double(double)>& g, double epsilon,
                                 double t_max, int resolution) {
    if (epsilon <= 0.0) throw std::invalid_argument("condition I: epsilon must be positive");
    const auto t = log_grid(0.5, t_max, std::max(64, resolution));
    validate_profile_window(g, t);
    ConditionCheck out;
    out.t_max = t_max;
    const std::size_t min_tail = std::max<std::size_t>(8, t.size() / 100);
    for (double delta = 0.5; delta >= 1e-4; delta *= 0.5) {
        const auto pred = [&](double s) {
            const double lhs = g((1.0 + delta) * s);
            const double rhs = (1.0 + epsilon) * g(s) * (1.0 + kRelSlack);
            // Overflowed profiles cannot be certified.
            if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
            return lhs <= rhs;
        };
        const std::size_t k = holding_suffix(t, pred);
        if (t.size() - k >= min_tail) {
            out.holds = true;
            out.delta = delta;
            out.t0 = (k == 0) ? t.front() : t[k - 1];
            return out;
        }
        out.delta = delta;
    }
    out.holds = false;
    out.t0 = t_max;
    return out;
}

ConditionCheck check_condition_II(const std::function<double(double)>& g, double epsilon,
                                  double delta, double t_max, int resolution) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("condition II: epsilon must lie in (0,1)");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("condition II: delta must lie in (0,1)");
    const auto t = log_grid(0.5, t_max, std::max(64, resolution));
    validate_profile_window(g, t);
    ConditionCheck out;
    out.delta = delta;
    out.t_max = t_max;
    const std::size_t min_tail = std::max<std::size_t>(8, t.size() / 100);
    const auto pred = [&](double s) {
        const double lhs = g((1.0 - delta) * s);
        const double rhs = (1.0 - epsilon) * g(s) * (1.0 - kRelSlack);
        if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
        return lhs >= rhs;
    };
    const std::size_t k = holding_suffix(t, pred);
    if (t.size() - k >= min_tail) {
        out.holds = true;
        out.t0 = (k == 0) ? t.front() : t[k - 1];
    } else {
        out.holds = false;
        out.t0 = t_max;
    }
    return out;
}

}  // namespace gsd::potentials

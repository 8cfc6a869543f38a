#include "coopnorm/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "coopnorm/errors.hpp"

namespace coopnorm {

double QuadraticCoefficients::retained_root() const {
    const double disc = std::max(discriminant(), 0.0);
    return -2.0 * C / (B + std::sqrt(disc));
}

double QuadraticCoefficients::discarded_root() const {
    if (A == 0.0) return std::numeric_limits<double>::infinity();
    const double disc = std::max(discriminant(), 0.0);
    return (-B - std::sqrt(disc)) / (2.0 * A);
}

double QuadraticCoefficients::vertex() const {
    if (A == 0.0) return std::numeric_limits<double>::infinity();
    return -B / (2.0 * A);
}

QuadraticCoefficients quadratic_coefficients(const Scenario& s, std::size_t type) {
    if (s.norm.beta != 0.0) throw UsageError("quadratic coefficients require beta = 0");
    s.validate(false);
    const std::size_t n = s.n();
    if (type >= n) throw DomainError("type index out of range");
    const double nd = static_cast<double>(n);
    const auto& w = s.incomes;
    const double g = s.grant;

    double total = 0.0;
    for (double x : w) total += x;
    double others = total - w[type];
    double mean_u = 0.0;
    for (double x : w) mean_u += s.utility(x + g);
    mean_u /= nd;

    QuadraticCoefficients q;
    q.c0 = s.utility(w[type] + others / nd + g);
    q.c1 = s.utility(w[type] + g);
    q.c2 = s.utility(total / nd + g);
    q.c3 = mean_u;
    const double m = s.m;
    q.A = (1.0 - m) * (q.c1 - q.c0);
    q.B = q.c0 - m * q.c3 - (1.0 - m) * (q.c2 - q.c0 + q.c1);
    q.C = q.c2 - q.c0;
    return q;
}

const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::Quadratic: return "quadratic";
        case SolveMethod::Bisection: return "bisection";
        case SolveMethod::None: return "none";
    }
    return "none";
}

BracketedRoot scan_and_bisect(const std::function<double(double)>& f, double lo, double hi, int intervals,
                              double tolerance) {
    BracketedRoot out;
    std::vector<double> xs(static_cast<std::size_t>(intervals) + 1);
    std::vector<bool> positive(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xs[k] = lo + (hi - lo) * static_cast<double>(k) / intervals;
        positive[k] = f(xs[k]) > 0.0;
    }
    std::size_t last = xs.size();
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (positive[k] != positive[k + 1]) {
            ++out.sign_changes;
            if (!positive[k]) last = k;
        }
    }
    if (!positive.back()) return out;
    if (last == xs.size()) {
        // Positive across the whole scan.
        if (positive.front()) {
            out.root = lo;
            out.found = true;
        }
        return out;
    }
    double a = xs[last], b = xs[last + 1];
    // Relative stopping rule: thresholds can be as small as 1e-12 when the
    // poorest types' autarky utility is very low.
    while (b - a > tolerance * b) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        (f(mid) > 0.0 ? b : a) = mid;
    }
    out.root = 0.5 * (a + b);
    out.found = true;
    return out;
}

namespace {

using TypeGap = std::function<double(std::size_t, double)>;

// Shared driver for the single- and two-alpha thresholds. `richest_root`, when
// set, supplies the closed-form root of type 0.
ThresholdResult solve_all_types(std::size_t n, double m, const TypeGap& gap, const SolverOptions& opts,
                                const std::function<double()>& richest_root) {
    ThresholdResult r;
    if (m == 0.0 || !(gap(0, opts.top) > 0.0)) {
        r.sustainable = false;
        r.delta_min = 1.0;
        r.gap_at_solution = m == 0.0 ? 0.0 : gap(0, opts.top);
        return r;
    }

    auto bisect_type = [&](std::size_t i) {
        return scan_and_bisect([&](double d) { return gap(i, d); }, 0.0, opts.top, opts.scan_intervals,
                               opts.tolerance);
    };

    double root = 0.0;
    if (richest_root) {
        root = richest_root();
        r.method = SolveMethod::Quadratic;
        r.sign_changes = 1;
    } else {
        const auto b = bisect_type(0);
        if (!b.found) throw ConsistencyError("no sign change found for the richest type's incentive gap");
        root = b.root;
        r.method = SolveMethod::Bisection;
        r.sign_changes = b.sign_changes;
    }
    if (!(root >= 0.0 && root < 1.0)) throw ConsistencyError("threshold root outside [0,1): " + std::to_string(root));

    r.sustainable = true;
    r.delta_min = root;
    r.binding_type = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (gap(i, r.delta_min) >= 0.0) continue;
        const auto b = bisect_type(i);
        if (!b.found) {
            // Some poorer type never complies: the norm cannot be sustained.
            r = ThresholdResult{};
            r.binding_type = i;
            r.gap_at_solution = gap(i, opts.top);
            return r;
        }
        if (b.root > r.delta_min) {
            r.delta_min = b.root;
            r.binding_type = i;
            r.method = SolveMethod::Bisection;
        }
    }
    r.gap_at_solution = gap(r.binding_type, r.delta_min);
    return r;
}

}  // namespace

ThresholdResult delta_min(const Scenario& s, const SolverOptions& opts) {
    s.validate(false);
    const auto u = stage_utilities(s);
    const double m = s.m;
    TypeGap gap = [&](std::size_t i, double d) { return normalized_gap(u, i, m, d); };
    std::function<double()> quad;
    if (opts.allow_quadratic && s.norm.beta == 0.0) {
        quad = [&] { return quadratic_coefficients(s, 0).retained_root(); };
    }
    return solve_all_types(s.n(), m, gap, opts, quad);
}

ThresholdResult delta_min_two_alpha(double alpha0, double alpha1, const Scenario& tmpl, const SolverOptions& opts) {
    tmpl.validate(false);
    Scenario today = tmpl;
    today.incomes = income_weights(tmpl.n(), alpha0);
    Scenario later = tmpl;
    later.incomes = income_weights(tmpl.n(), alpha1);
    const auto u0 = stage_utilities(today);
    const auto u1 = stage_utilities(later);
    const double m = tmpl.m;
    TypeGap gap = [&](std::size_t i, double d) {
        const double q = 1.0 - m;
        return (1.0 - d) * (1.0 - d * q) * u0.gain[i] + d * normalized_continuation(u1.surplus, i, m, d);
    };
    return solve_all_types(tmpl.n(), m, gap, opts, {});
}

std::size_t binding_type_check(const Scenario& s) {
    const auto v = values(s);
    std::size_t best = 0;
    double best_gap = v.v_dev[0] - v.v_coop[0];
    for (std::size_t i = 1; i < s.n(); ++i) {
        const double g = v.v_dev[i] - v.v_coop[i];
        if (g > best_gap) {
            best_gap = g;
            best = i;
        }
    }
    return best;
}

}  // namespace coopnorm

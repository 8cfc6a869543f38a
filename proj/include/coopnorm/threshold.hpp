#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "coopnorm/value.hpp"

namespace coopnorm {

/**
 * Incentive condition of a type under the all-contribute norm (beta = 0),
 * written as C + B*delta + A*delta^2 > 0.
 *
 *   c0  utility of the one-shot free ride
 *   c1  autarky utility of the type
 *   c2  utility of mean income (everyone's cooperative consumption)
 *   c3  mean autarky utility across types
 */
struct QuadraticCoefficients {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double A = 0.0, B = 0.0, C = 0.0;

    double discriminant() const { return B * B - 4.0 * A * C; }
    double evaluate(double delta) const { return C + delta * (B + delta * A); }
    /// Smaller positive root; -2C / (B + sqrt(disc)) stays finite as A -> 0.
    double retained_root() const;
    /// The other root, +infinity when A = 0.
    double discarded_root() const;
    /// -B / (2A), +infinity when A = 0.
    double vertex() const;
};

/// Throws UsageError unless s.norm.beta == 0. `type` is zero-based.
QuadraticCoefficients quadratic_coefficients(const Scenario& s, std::size_t type = 0);

enum class SolveMethod { Quadratic, Bisection, None };

const char* to_string(SolveMethod m);

struct ThresholdResult {
    bool sustainable = false;
    /// Minimum discount factor; 1.0 when unsustainable.
    double delta_min = 1.0;
    SolveMethod method = SolveMethod::None;
    /// Zero-based type whose incentive constraint defines delta_min.
    std::size_t binding_type = 0;
    /// Normalized gap of the binding type at delta_min.
    double gap_at_solution = 0.0;
    /// Sign changes seen on the coarse scan of the richest type's gap.
    int sign_changes = 0;
};

struct SolverOptions {
    bool allow_quadratic = true;
    /// Bisection stops once the bracket is narrower than tolerance * upper end.
    double tolerance = 1e-12;
    int scan_intervals = 64;
    /// Gap is probed here to decide whether cooperation is ever sustainable.
    double top = 1.0 - 1e-9;
};

/**
 * Minimum discount factor at which every type weakly prefers the norm to a
 * one-shot deviation punished by permanent autarky. The delta field of `s` is
 * ignored.
 *
 * The richest type's root is found first (closed-form quadratic when beta = 0,
 * coarse scan plus bisection otherwise). If another type still strictly prefers
 * to deviate there, its own root is solved and the largest root is returned,
 * with binding_type naming the type that set it.
 */
ThresholdResult delta_min(const Scenario& s, const SolverOptions& opts = {});

/**
 * Threshold when inequality is alpha0 today and alpha1 in every later period.
 *
 * The one-shot comparison (cooperate vs free ride) uses alpha0 incomes and
 * alpha0 contributions of the others; both continuations use alpha1 incomes.
 * `tmpl` supplies n, beta, rho, m and grant; its incomes are replaced.
 */
ThresholdResult delta_min_two_alpha(double alpha0, double alpha1, const Scenario& tmpl,
                                    const SolverOptions& opts = {});

/// Type with the largest V^d - V^c at s.delta; ties go to the lowest index.
std::size_t binding_type_check(const Scenario& s);

/// Root of a gap function that is negative below the threshold and positive
/// above it on [0, top]. Exposed for reuse by the fiscal module.
struct BracketedRoot {
    double root = 0.0;
    int sign_changes = 0;
    bool found = false;
};

BracketedRoot scan_and_bisect(const std::function<double(double)>& f, double lo, double hi, int intervals,
                              double tolerance);

}  // namespace coopnorm

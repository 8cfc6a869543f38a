#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coopnorm/value.hpp"

namespace coopnorm {

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;

    double at(int k) const;
    double step() const;
};

struct NormSearchConfig {
    double lo = 0.0;
    double hi = 8.0;
    int coarse_points = 100;
    int refine_points = 1000;
    unsigned workers = 1;
    /// Keep every evaluated (beta, delta_min) pair in the result.
    bool keep_series = false;
};

struct NormSelectionResult {
    /// Empty when no evaluated beta sustains cooperation.
    std::optional<double> beta_star;
    double delta_min_at_star = 1.0;
    GridSpec coarse;
    GridSpec refine;
    /// Coarse then refine evaluations, in evaluation order.
    std::vector<std::pair<double, double>> all_grid_values;
};

/**
 * Long-run norm: the progressivity beta minimizing the cooperation threshold at
 * inequality alpha and mobility m.
 *
 * Stage one scans [lo, hi] at coarse_points; stage two rescans one coarse step
 * either side of the coarse winner at refine_points. The winner is the argmin
 * over both stages, so refinement can only improve on the coarse pass.
 * Unsustainable points count as delta_min = 1. Ties go to the smaller beta.
 * `tmpl` supplies n, rho and grant.
 */
NormSelectionResult beta_star(double alpha, double m, const Scenario& tmpl, const NormSearchConfig& cfg = {});

/**
 * Savitzky-Golay smoothing: each point becomes the value of the least-squares
 * polynomial of degree `order` fitted over a centered `window`. The first and
 * last window/2 points take the fitted polynomial of the first and last full
 * window, so polynomials up to `order` pass through unchanged.
 */
std::vector<double> savitzky_golay(std::span<const double> series, int window, int order);

}  // namespace coopnorm

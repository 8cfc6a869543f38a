#include "coopnorm/norm_select.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "coopnorm/errors.hpp"
#include "coopnorm/parallel.hpp"
#include "coopnorm/threshold.hpp"

namespace coopnorm {

double GridSpec::at(int k) const {
    if (points <= 1) return lo;
    if (k == points - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

double GridSpec::step() const { return points <= 1 ? 0.0 : (hi - lo) / static_cast<double>(points - 1); }

namespace {

struct Candidate {
    double beta = 0.0;
    double delta = 1.0;
};

std::vector<Candidate> evaluate_grid(const GridSpec& grid, const Scenario& base, unsigned workers) {
    return parallel_map(static_cast<std::size_t>(grid.points), workers, [&](std::size_t k) {
        Scenario s = base;
        s.norm.beta = grid.at(static_cast<int>(k));
        return Candidate{s.norm.beta, delta_min(s).delta_min};
    });
}

// Sequential reduction: strict improvement only, so the first (smallest beta in
// a sorted grid) wins ties.
void absorb(Candidate& best, bool& have, const Candidate& c) {
    if (!have || c.delta < best.delta || (c.delta == best.delta && c.beta < best.beta)) {
        best = c;
        have = true;
    }
}

}  // namespace

NormSelectionResult beta_star(double alpha, double m, const Scenario& tmpl, const NormSearchConfig& cfg) {
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("alpha must be finite and >= 0");
    if (!(m > 0.0 && m <= 1.0)) throw DomainError("norm selection requires m in (0,1]");
    if (!(cfg.lo >= 0.0 && cfg.hi > cfg.lo) || cfg.coarse_points < 2 || cfg.refine_points < 2) {
        throw DomainError("invalid beta search grid");
    }
    Scenario base = tmpl;
    base.incomes = income_weights(tmpl.n(), alpha);
    base.m = m;
    base.validate(false);

    NormSelectionResult out;
    out.coarse = GridSpec{cfg.lo, cfg.hi, cfg.coarse_points};
    const auto coarse = evaluate_grid(out.coarse, base, cfg.workers);

    Candidate best;
    bool have = false;
    for (const auto& c : coarse) absorb(best, have, c);

    const double step = out.coarse.step();
    out.refine = GridSpec{std::max(cfg.lo, best.beta - step), std::min(cfg.hi, best.beta + step), cfg.refine_points};
    const auto refine = evaluate_grid(out.refine, base, cfg.workers);
    for (const auto& c : refine) absorb(best, have, c);

    if (cfg.keep_series) {
        for (const auto& c : coarse) out.all_grid_values.emplace_back(c.beta, c.delta);
        for (const auto& c : refine) out.all_grid_values.emplace_back(c.beta, c.delta);
    }
    out.delta_min_at_star = best.delta;
    if (best.delta < 1.0) out.beta_star = best.beta;
    return out;
}

std::vector<double> savitzky_golay(std::span<const double> series, int window, int order) {
    if (window < 3 || window % 2 == 0) throw DomainError("Savitzky-Golay window must be odd and >= 3");
    if (order < 0 || order >= window) throw DomainError("Savitzky-Golay order must satisfy 0 <= order < window");
    if (series.size() < static_cast<std::size_t>(window)) throw DomainError("series shorter than the smoothing window");

    const int half = window / 2;
    // Vandermonde over offsets -half..half; the least-squares fit of a window is
    // coef = pinv * y, and the fitted value at offset t is sum_j coef_j t^j.
    Eigen::MatrixXd vander(window, order + 1);
    for (int r = 0; r < window; ++r) {
        const double t = static_cast<double>(r - half);
        double p = 1.0;
        for (int c = 0; c <= order; ++c) {
            vander(r, c) = p;
            p *= t;
        }
    }
    const Eigen::MatrixXd pinv = vander.completeOrthogonalDecomposition().pseudoInverse();

    const auto n = static_cast<int>(series.size());
    std::vector<double> out(series.size());
    auto fit_at = [&](int start, int offset) {
        Eigen::VectorXd y(window);
        for (int r = 0; r < window; ++r) y(r) = series[static_cast<std::size_t>(start + r)];
        const Eigen::VectorXd coef = pinv * y;
        double value = 0.0, p = 1.0;
        for (int c = 0; c <= order; ++c) {
            value += coef(c) * p;
            p *= static_cast<double>(offset);
        }
        return value;
    };
    for (int k = 0; k < n; ++k) {
        if (k < half) {
            out[static_cast<std::size_t>(k)] = fit_at(0, k - half);
        } else if (k >= n - half) {
            out[static_cast<std::size_t>(k)] = fit_at(n - window, k - (n - 1 - half));
        } else {
            double value = 0.0;
            for (int r = 0; r < window; ++r) value += pinv(0, r) * series[static_cast<std::size_t>(k - half + r)];
            out[static_cast<std::size_t>(k)] = value;
        }
    }
    return out;
}

}  // namespace coopnorm

#include "coopnorm/fiscal.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "coopnorm/errors.hpp"
#include "coopnorm/parallel.hpp"

namespace coopnorm {

void FiscalPolicy::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tax rate tau must lie in [0,1]");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("cost of public funds s must lie in (0,1]");
}

const char* to_string(Regime r) { return r == Regime::Cooperative ? "cooperative" : "autarkic"; }

Scenario post_tax_scenario(const FiscalPolicy& policy, const Scenario& base) {
    policy.validate();
    base.validate(false);
    Scenario out = base;
    double revenue = 0.0;
    for (double& w : out.incomes) {
        revenue += policy.tau * w;
        w *= 1.0 - policy.tau;
    }
    out.grant = base.grant + (1.0 - policy.s) * revenue / static_cast<double>(base.n());
    return out;
}

namespace {

double mean_utility(const Scenario& s, bool cooperative) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        const double x = cooperative ? coop_consumption(s, i) : s.incomes[i] + s.grant;
        total += s.utility(x);
    }
    return total / static_cast<double>(s.n());
}

}  // namespace

double autarky_welfare(const FiscalPolicy& policy, const Scenario& base) {
    return mean_utility(post_tax_scenario(policy, base), false);
}

WelfareResult welfare(const FiscalPolicy& policy, double delta, const Scenario& base) {
    if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("discount factor delta must lie in [0,1)");
    const Scenario s = post_tax_scenario(policy, base);
    WelfareResult out;
    out.threshold = delta_min(s);
    const bool coop = out.threshold.sustainable && delta >= out.threshold.delta_min;
    out.regime = coop ? Regime::Cooperative : Regime::Autarkic;
    out.value = mean_utility(s, coop);
    return out;
}

TaxResult optimal_tax(double delta, const Scenario& base, const TaxGridConfig& cfg) {
    if (cfg.points < 2) throw DomainError("tax grid needs at least two points");
    auto tau_at = [&](int k) {
        return k == cfg.points - 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(cfg.points - 1);
    };
    struct Point {
        double tau = 0.0;
        WelfareResult w;
        double autarky = 0.0;
    };
    const auto grid = parallel_map(static_cast<std::size_t>(cfg.points), cfg.workers, [&](std::size_t k) {
        const FiscalPolicy p{tau_at(static_cast<int>(k)), cfg.s};
        return Point{p.tau, welfare(p, delta, base), autarky_welfare(p, base)};
    });

    TaxResult out;
    std::size_t best = 0, best_a = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (grid[k].w.value > grid[best].w.value) best = k;
        if (grid[k].autarky > grid[best_a].autarky) best_a = k;
    }
    out.tau_star = grid[best].tau;
    out.regime = grid[best].w.regime;
    out.welfare_at_star = grid[best].w.value;
    out.tau_a = grid[best_a].tau;
    out.welfare_autarky = grid[best_a].autarky;
    for (const auto& p : grid) out.min_delta_min = std::min(out.min_delta_min, p.w.threshold.delta_min);

    if (cfg.refine) {
        // Golden-section on the welfare function over the neighbouring bracket.
        double a = grid[best == 0 ? 0 : best - 1].tau;
        double b = grid[std::min(best + 1, grid.size() - 1)].tau;
        auto f = [&](double t) { return welfare(FiscalPolicy{t, cfg.s}, delta, base).value; };
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = f(x1);
            }
        }
        const double t = 0.5 * (a + b);
        const auto w = welfare(FiscalPolicy{t, cfg.s}, delta, base);
        if (w.value > out.welfare_at_star) {
            out.tau_star = t;
            out.regime = w.regime;
            out.welfare_at_star = w.value;
        }
    }

    // tau_dagger: first grid bracket where delta_min(tau) - delta changes sign,
    // refined by bisection on tau.
    auto excess = [&](const WelfareResult& w) { return w.threshold.delta_min - delta; };
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double e0 = excess(grid[k].w), e1 = excess(grid[k + 1].w);
        if ((e0 > 0.0) == (e1 > 0.0)) continue;
        double lo = grid[k].tau, hi = grid[k + 1].tau;
        const bool rising = e1 > 0.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double e = delta_min(post_tax_scenario(FiscalPolicy{mid, cfg.s}, base)).delta_min - delta;
            ((e > 0.0) == rising ? hi : lo) = mid;
        }
        out.tau_dagger = 0.5 * (lo + hi);
        break;
    }
    return out;
}

}  // namespace coopnorm

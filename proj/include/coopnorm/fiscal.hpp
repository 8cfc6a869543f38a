#pragma once

#include <optional>

#include "coopnorm/threshold.hpp"
#include "coopnorm/value.hpp"

namespace coopnorm {

/// Proportional income tax with a lump-sum rebate. A fraction s of revenue is
/// lost before rebate.
struct FiscalPolicy {
    double tau = 0.0;
    double s = 1.0;

    void validate() const;
};

enum class Regime { Autarkic, Cooperative };

const char* to_string(Regime r);

/// Incomes become (1 - tau) w_i and every player receives (1 - s) * revenue / n
/// on top of base.grant. The contribution norm applies to post-tax income.
Scenario post_tax_scenario(const FiscalPolicy& policy, const Scenario& base);

struct WelfareResult {
    double value = 0.0;
    Regime regime = Regime::Autarkic;
    ThresholdResult threshold;
};

/// Average flow utility across types in the regime selected by comparing
/// delta with the post-tax cooperation threshold.
WelfareResult welfare(const FiscalPolicy& policy, double delta, const Scenario& base);

/// Average autarky utility at the policy; independent of m and beta.
double autarky_welfare(const FiscalPolicy& policy, const Scenario& base);

struct TaxGridConfig {
    double s = 0.09;
    int points = 501;
    /// Golden-section search inside the winning grid bracket.
    bool refine = false;
    unsigned workers = 1;
};

struct TaxResult {
    double tau_star = 0.0;
    Regime regime = Regime::Autarkic;
    double welfare_at_star = 0.0;
    /// Rate at which the post-tax threshold crosses delta, if it does on [0,1].
    std::optional<double> tau_dagger;
    double tau_a = 0.0;
    double welfare_autarky = 0.0;
    /// Smallest threshold over the grid.
    double min_delta_min = 1.0;
};

TaxResult optimal_tax(double delta, const Scenario& base, const TaxGridConfig& cfg = {});

}  // namespace coopnorm

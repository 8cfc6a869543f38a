#pragma once

#include <cstddef>
#include <vector>

#include "coopnorm/econ.hpp"

namespace coopnorm {

/**
 * One fully specified economy.
 *
 * `incomes` are the pre-transfer incomes of the n positions, richest first. For
 * the baseline game they are an IncomeDistribution's weights; after taxation
 * they are scaled down and no longer sum to one. `grant` is a lump-sum addition
 * to every player's consumption in every state and regime.
 */
struct Scenario {
    std::vector<double> incomes;
    double grant = 0.0;
    ContributionNorm norm;
    Utility utility;
    double m = 0.0;
    double delta = 0.0;

    static Scenario make(const IncomeDistribution& dist, double beta, double rho, double m, double delta,
                         double grant = 0.0);

    std::size_t n() const { return incomes.size(); }
    Scenario with_delta(double d) const;

    /// Throws DomainError on any out-of-range field. delta is checked only when
    /// `check_delta` is set so threshold searches can pass a template.
    void validate(bool check_delta = true) const;
};

/// Per-position flow utilities in the three regimes.
struct StageUtilities {
    std::vector<double> coop;       ///< u(x_i^c), norm followed by all
    std::vector<double> deviation;  ///< u of the one-shot free ride of position i
    std::vector<double> autarky;    ///< u(w_i + g)
    /// coop - deviation and coop - autarky, computed from consumption
    /// differences so they keep full relative precision when the regimes
    /// nearly coincide.
    std::vector<double> gain;
    std::vector<double> surplus;

    double mean_coop() const;
    double mean_autarky() const;
};

StageUtilities stage_utilities(const Scenario& s);

struct ValueTriple {
    std::vector<double> v_coop;
    std::vector<double> v_dev;
    std::vector<double> v_aut;
};

struct IncentiveGap {
    double raw = 0.0;         ///< V^c - V^d
    double normalized = 0.0;  ///< raw * (1-delta)(1-delta(1-m)), finite as delta -> 1
};

// Type indices below are zero-based: 0 is the richest position.

/// (1 - theta(w_i)) w_i + (1/n) sum_j theta(w_j) w_j + g
double coop_consumption(const Scenario& s, std::size_t i);

/// w_i + (1/n) sum_{j != i} theta(w_j) w_j + g
double deviation_consumption(const Scenario& s, std::size_t i);

double value_autarky(const Scenario& s, std::size_t i);
double value_coop(const Scenario& s, std::size_t i);
double value_deviation(const Scenario& s, std::size_t i);

ValueTriple values(const Scenario& s);

IncentiveGap incentive_gap(const Scenario& s, std::size_t i);

/**
 * Normalized incentive gap from precomputed stage utilities.
 *
 * Multiplying V^c - V^d by (1-delta)(1-delta(1-m)) turns it into a polynomial of
 * degree two in delta, which stays well defined at delta = 1 where it equals
 * m * (mean coop utility - mean autarky utility).
 */
double normalized_gap(const StageUtilities& u, std::size_t i, double m, double delta);

/// Continuation E[V_next] * (1-delta)(1-delta(1-m)) from position i for a regime
/// with flow utilities `flow`.
double normalized_continuation(const std::vector<double>& flow, std::size_t i, double m, double delta);

}  // namespace coopnorm

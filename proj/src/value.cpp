#include "coopnorm/value.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "coopnorm/errors.hpp"

namespace coopnorm {

namespace {

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Net receipt of position i under the norm: pool minus own contribution,
// summed as differences so that equal contributions cancel exactly.
std::vector<double> net_transfers(const Scenario& s) {
    const std::size_t n = s.n();
    std::vector<double> own(n);
    for (std::size_t j = 0; j < n; ++j) own[j] = s.norm.share(s.incomes[j]) * s.incomes[j];
    std::vector<double> net(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) net[i] += own[k] - own[i];
        net[i] /= static_cast<double>(n);
    }
    return net;
}

double own_contribution(const Scenario& s, std::size_t i) {
    return s.norm.share(s.incomes[i]) * s.incomes[i];
}

void check_index(const Scenario& s, std::size_t i) {
    if (i >= s.n()) throw DomainError("type index " + std::to_string(i) + " out of range");
}

}  // namespace

Scenario Scenario::make(const IncomeDistribution& dist, double beta, double rho, double m, double delta,
                        double grant) {
    Scenario s{dist.weights, grant, ContributionNorm{beta}, Utility{rho}, m, delta};
    s.validate();
    return s;
}

Scenario Scenario::with_delta(double d) const {
    Scenario out = *this;
    out.delta = d;
    return out;
}

void Scenario::validate(bool check_delta) const {
    if (incomes.size() < 2) throw DomainError("scenario needs at least two income types");
    for (double w : incomes) {
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("incomes must lie in [0,1]");
    }
    if (!(grant >= 0.0) || !std::isfinite(grant)) throw DomainError("grant must be finite and >= 0");
    if (!std::isfinite(norm.beta) || norm.beta < 0.0) throw DomainError("beta must be finite and >= 0");
    if (!std::isfinite(utility.rho) || utility.rho < 0.0) throw DomainError("rho must be finite and >= 0");
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("mobility m must lie in [0,1]");
    if (check_delta && !(delta >= 0.0 && delta < 1.0)) throw DomainError("discount factor delta must lie in [0,1)");
}

double StageUtilities::mean_coop() const { return mean(coop); }
double StageUtilities::mean_autarky() const { return mean(autarky); }

double coop_consumption(const Scenario& s, std::size_t i) {
    check_index(s, i);
    return s.incomes[i] + s.grant + net_transfers(s)[i];
}

double deviation_consumption(const Scenario& s, std::size_t i) {
    check_index(s, i);
    const double keep = own_contribution(s, i) * (1.0 - 1.0 / static_cast<double>(s.n()));
    return s.incomes[i] + s.grant + net_transfers(s)[i] + keep;
}

StageUtilities stage_utilities(const Scenario& s) {
    const std::size_t n = s.n();
    const auto net = net_transfers(s);
    StageUtilities u;
    u.coop.resize(n);
    u.deviation.resize(n);
    u.autarky.resize(n);
    u.gain.resize(n);
    u.surplus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = s.incomes[i] + s.grant;
        const double coop = base + net[i];
        // The free rider keeps its contribution except its own 1/n share of it.
        const double keep = own_contribution(s, i) * (1.0 - 1.0 / static_cast<double>(n));
        u.coop[i] = s.utility(coop);
        u.deviation[i] = s.utility(coop + keep);
        u.autarky[i] = s.utility(base);
        u.gain[i] = -s.utility.gain(coop, keep);
        u.surplus[i] = s.utility.gain(base, net[i]);
    }
    return u;
}

namespace {

// Closed form of V_i = f_i + delta [ (1-m) V_i + (m/n) sum_j V_j ].
double regime_value(const std::vector<double>& flow, std::size_t i, double m, double delta) {
    const double persist = 1.0 - delta * (1.0 - m);
    return (flow[i] + delta * m * mean(flow) / (1.0 - delta)) / persist;
}

}  // namespace

double value_autarky(const Scenario& s, std::size_t i) {
    check_index(s, i);
    return regime_value(stage_utilities(s).autarky, i, s.m, s.delta);
}

double value_coop(const Scenario& s, std::size_t i) {
    check_index(s, i);
    return regime_value(stage_utilities(s).coop, i, s.m, s.delta);
}

namespace {

// One-shot free ride, then autarky forever. The continuation is
// (1-m) V_i^a + (m/n) S with S = sum_j V_j^a = sum_j u_j^a / (1-delta).
// The 1/(1-delta) on the m-term is required for the value to satisfy its own
// recursion; dropping it understates the continuation.
double deviation_value(const StageUtilities& u, std::size_t i, double m, double delta) {
    const double n = static_cast<double>(u.autarky.size());
    const double sum_aut = std::accumulate(u.autarky.begin(), u.autarky.end(), 0.0);
    const double total = sum_aut / (1.0 - delta);
    return u.deviation[i] + delta * ((1.0 - m) * regime_value(u.autarky, i, m, delta) + m / n * total);
}

}  // namespace

double value_deviation(const Scenario& s, std::size_t i) {
    check_index(s, i);
    return deviation_value(stage_utilities(s), i, s.m, s.delta);
}

ValueTriple values(const Scenario& s) {
    s.validate();
    const auto u = stage_utilities(s);
    ValueTriple out;
    for (std::size_t i = 0; i < s.n(); ++i) {
        out.v_coop.push_back(regime_value(u.coop, i, s.m, s.delta));
        out.v_dev.push_back(deviation_value(u, i, s.m, s.delta));
        out.v_aut.push_back(regime_value(u.autarky, i, s.m, s.delta));
    }
    return out;
}

double normalized_continuation(const std::vector<double>& flow, std::size_t i, double m, double delta) {
    const double avg = mean(flow);
    const double q = 1.0 - m;
    return q * ((1.0 - delta) * flow[i] + delta * m * avg) + m * avg * (1.0 - delta * q);
}

double normalized_gap(const StageUtilities& u, std::size_t i, double m, double delta) {
    const double q = 1.0 - m;
    // The continuation map is linear, so the coop-minus-autarky difference can
    // be pushed inside it.
    const double one_shot = (1.0 - delta) * (1.0 - delta * q) * u.gain[i];
    return one_shot + delta * normalized_continuation(u.surplus, i, m, delta);
}

IncentiveGap incentive_gap(const Scenario& s, std::size_t i) {
    check_index(s, i);
    s.validate();
    const auto u = stage_utilities(s);
    IncentiveGap g;
    g.raw = regime_value(u.coop, i, s.m, s.delta) - deviation_value(u, i, s.m, s.delta);
    g.normalized = normalized_gap(u, i, s.m, s.delta);
    return g;
}

}  // namespace coopnorm

#include "coopnorm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "coopnorm/errors.hpp"
#include "coopnorm/parallel.hpp"
#include "coopnorm/threshold.hpp"

namespace coopnorm {

const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::Threshold: return "threshold";
        case SweepKind::Norm: return "norm";
        case SweepKind::Tax: return "tax";
    }
    return "threshold";
}

std::vector<std::string> sweepable_params(SweepKind kind) {
    switch (kind) {
        case SweepKind::Threshold: return {"m", "alpha", "alpha1", "beta"};
        case SweepKind::Norm: return {"m", "alpha"};
        case SweepKind::Tax: return {"m", "alpha", "beta", "delta"};
    }
    return {};
}

void SweepSpec::validate() const {
    static const std::vector<std::string> known = {"m", "alpha", "alpha1", "beta", "tau", "delta"};
    if (std::find(known.begin(), known.end(), param) == known.end()) {
        throw UsageError("--param: unknown sweep parameter '" + param + "'");
    }
    const auto allowed = sweepable_params(kind);
    if (std::find(allowed.begin(), allowed.end(), param) == allowed.end()) {
        throw UsageError("--param: '" + param + "' cannot be swept in a " + to_string(kind) + " sweep");
    }
    if (points < 2) throw UsageError("--points: a sweep needs at least 2 grid points");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw UsageError("--lo/--hi: need finite lo < hi");
    if (fixed.n < 2) throw UsageError("--n: at least two income types are required");
}

double SweepSpec::value_at(int k) const {
    if (k == points - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

ScenarioFields SweepSpec::fields_at(int k) const {
    ScenarioFields f = fixed;
    const double v = value_at(k);
    if (param == "m") f.m = v;
    else if (param == "alpha") f.alpha = v;
    else if (param == "alpha1") {
        f.alpha1 = v;
        if (!f.alpha0) f.alpha0 = f.alpha;
    } else if (param == "beta") f.beta = v;
    else if (param == "delta") f.delta = v;
    return f;
}

std::vector<std::string> threshold_columns() {
    return {"n", "rho", "alpha", "alpha0", "alpha1", "beta", "m", "delta_min", "sustainable"};
}

std::vector<std::string> norm_columns(bool smoothed) {
    std::vector<std::string> c = {"n", "rho", "m", "alpha", "beta_star", "delta_min_at_star"};
    if (smoothed) c.push_back("beta_star_smoothed");
    return c;
}

std::vector<std::string> tax_columns() {
    return {"n", "rho", "s", "delta", "m", "beta", "alpha", "tau_star", "tau_dagger", "tau_a", "regime", "welfare"};
}

Scenario scenario_from(const ScenarioFields& f) {
    if (f.n < 2) throw DomainError("n must be at least 2");
    return Scenario::make(IncomeDistribution::make(static_cast<std::size_t>(f.n), f.alpha), f.beta, f.rho, f.m,
                          f.delta);
}

namespace {

bool two_period(const ScenarioFields& f) { return f.alpha1.has_value(); }

// Records hold numbers at the precision they are written with, so a file read
// back compares equal to the record it came from.
std::vector<Cell> serialized(std::vector<Cell> row) {
    for (Cell& c : row) {
        if (double* x = std::get_if<double>(&c)) *x = round_to_serialized(*x);
    }
    return row;
}

std::vector<Cell> threshold_row(const ScenarioFields& f, const SolverOptions& solver) {
    ThresholdResult r;
    Cell alpha = f.alpha, alpha0, alpha1;
    if (two_period(f)) {
        const double a0 = f.alpha0.value_or(f.alpha);
        const Scenario tmpl = scenario_from(ScenarioFields{f.n, f.rho, a0, {}, {}, f.beta, f.m, f.delta, f.s});
        r = delta_min_two_alpha(a0, *f.alpha1, tmpl, solver);
        alpha = std::monostate{};
        alpha0 = a0;
        alpha1 = *f.alpha1;
    } else {
        r = delta_min(scenario_from(f), solver);
    }
    return serialized({static_cast<double>(f.n), f.rho, alpha, alpha0, alpha1, f.beta, f.m, r.delta_min,
                       r.sustainable ? 1.0 : 0.0});
}

std::vector<Cell> tax_row(const ScenarioFields& f, const TaxGridConfig& cfg) {
    TaxGridConfig c = cfg;
    c.s = f.s;
    const TaxResult r = optimal_tax(f.delta, scenario_from(f), c);
    Cell dagger;
    if (r.tau_dagger) dagger = *r.tau_dagger;
    return serialized({static_cast<double>(f.n), f.rho, f.s, f.delta, f.m, f.beta, f.alpha, r.tau_star, dagger,
                       r.tau_a, std::string(to_string(r.regime)), r.welfare_at_star});
}

}  // namespace

Table threshold_record(const ScenarioFields& f, const SolverOptions& solver) {
    Table t(threshold_columns());
    t.add_row(threshold_row(f, solver));
    return t;
}

Table tax_record(const ScenarioFields& f, const TaxGridConfig& cfg) {
    Table t(tax_columns());
    t.add_row(tax_row(f, cfg));
    return t;
}

Table run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
    spec.validate();
    const auto count = static_cast<std::size_t>(spec.points);
    switch (spec.kind) {
        case SweepKind::Threshold: {
            Table t(threshold_columns());
            auto rows = parallel_map(count, opts.workers,
                                     [&](std::size_t k) { return threshold_row(spec.fields_at(static_cast<int>(k)), {}); });
            for (auto& r : rows) t.add_row(std::move(r));
            return t;
        }
        case SweepKind::Norm: {
            NormSearchConfig cfg = opts.norm;
            cfg.workers = 1;
            cfg.keep_series = false;
            auto results = parallel_map(count, opts.workers, [&](std::size_t k) {
                const ScenarioFields f = spec.fields_at(static_cast<int>(k));
                return beta_star(f.alpha, f.m, scenario_from(f), cfg);
            });
            std::vector<Cell> smoothed(count);
            const bool all_defined = std::all_of(results.begin(), results.end(),
                                                 [](const NormSelectionResult& r) { return r.beta_star.has_value(); });
            if (opts.smooth && all_defined) {
                std::vector<double> raw;
                for (const auto& r : results) raw.push_back(*r.beta_star);
                const auto sm = savitzky_golay(raw, opts.smooth_window, opts.smooth_order);
                for (std::size_t k = 0; k < count; ++k) smoothed[k] = sm[k];
            }
            Table t(norm_columns(opts.smooth));
            for (std::size_t k = 0; k < count; ++k) {
                const ScenarioFields f = spec.fields_at(static_cast<int>(k));
                Cell b;
                if (results[k].beta_star) b = *results[k].beta_star;
                std::vector<Cell> row = {static_cast<double>(f.n), f.rho, f.m, f.alpha, b,
                                         results[k].delta_min_at_star};
                if (opts.smooth) row.push_back(smoothed[k]);
                t.add_row(serialized(std::move(row)));
            }
            return t;
        }
        case SweepKind::Tax: {
            TaxGridConfig cfg = opts.tax;
            cfg.workers = 1;
            Table t(tax_columns());
            auto rows = parallel_map(count, opts.workers,
                                     [&](std::size_t k) { return tax_row(spec.fields_at(static_cast<int>(k)), cfg); });
            for (auto& r : rows) t.add_row(std::move(r));
            return t;
        }
    }
    throw UsageError("unknown sweep kind");
}

Table run_sweeps(const std::vector<SweepSpec>& specs, const SweepOptions& opts) {
    Table out;
    for (const auto& spec : specs) out.append(run_sweep(spec, opts));
    return out;
}

namespace {

SweepSpec make_spec(SweepKind kind, std::string param, double lo, double hi, int points, ScenarioFields f) {
    SweepSpec s;
    s.kind = kind;
    s.param = std::move(param);
    s.lo = lo;
    s.hi = hi;
    s.points = points;
    s.fixed = f;
    return s;
}

Preset fig2(const std::string& name, const std::vector<double>& betas) {
    Preset p{name, "threshold against mobility m for several inequality levels (N=3, rho=1)", "m", "delta_min",
             betas.size() > 1 ? "beta,alpha" : "alpha", {}};
    for (double beta : betas) {
        for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
            ScenarioFields f;
            f.n = 3;
            f.rho = 1.0;
            f.alpha = alpha;
            f.beta = beta;
            p.sweeps.push_back(make_spec(SweepKind::Threshold, "m", 0.05, 1.0, 96, f));
        }
    }
    return p;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig2", "fig2-beta0", "fig2-beta1", "fig3", "fig-norm", "fig4"}; }

Preset preset(const std::string& name) {
    if (name == "fig2") return fig2(name, {0.0, 1.0});
    if (name == "fig2-beta0") return fig2(name, {0.0});
    if (name == "fig2-beta1") return fig2(name, {1.0});
    if (name == "fig3") {
        Preset p{name, "two-period threshold against future inequality alpha1 (N=5, rho=1, alpha0=0.5)", "alpha1",
                 "delta_min", "beta,m", {}};
        for (double beta : {1.0, 4.0}) {
            for (double m : {0.2, 0.5, 0.8}) {
                ScenarioFields f;
                f.n = 5;
                f.rho = 1.0;
                f.alpha = 0.5;
                f.alpha0 = 0.5;
                f.beta = beta;
                f.m = m;
                p.sweeps.push_back(make_spec(SweepKind::Threshold, "alpha1", 0.6, 3.0, 50, f));
            }
        }
        return p;
    }
    if (name == "fig-norm") {
        Preset p{name, "threshold-minimizing norm beta* against inequality (N=6, rho=4)", "alpha", "beta_star", "m",
                 {}};
        for (double m : {0.4, 0.9}) {
            ScenarioFields f;
            f.n = 6;
            f.rho = 4.0;
            f.m = m;
            p.sweeps.push_back(make_spec(SweepKind::Norm, "alpha", 0.05, 1.5, 30, f));
        }
        return p;
    }
    if (name == "fig4") {
        Preset p{name, "welfare-maximizing tax against inequality (N=3, rho=0.5, s=0.09, delta=0.7)", "alpha",
                 "tau_star", "m,beta", {}};
        for (auto [m, beta] : {std::pair{0.8, 1.5}, std::pair{0.8, 2.0}, std::pair{0.4, 2.0}, std::pair{0.8, 0.0}}) {
            ScenarioFields f;
            f.n = 3;
            f.rho = 0.5;
            f.s = 0.09;
            f.delta = 0.7;
            f.m = m;
            f.beta = beta;
            p.sweeps.push_back(make_spec(SweepKind::Tax, "alpha", 0.0, 8.0, 33, f));
        }
        return p;
    }
    throw UsageError("--preset: unknown preset '" + name + "'");
}

}  // namespace coopnorm

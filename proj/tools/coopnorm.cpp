// coopnorm: command-line front end for cooperation thresholds, norm selection,
// optimal taxation and the Monte Carlo oracle.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coopnorm/chart.hpp"
#include "coopnorm/errors.hpp"
#include "coopnorm/fiscal.hpp"
#include "coopnorm/norm_select.hpp"
#include "coopnorm/records.hpp"
#include "coopnorm/sim.hpp"
#include "coopnorm/sweep.hpp"
#include "coopnorm/threshold.hpp"
#include "coopnorm/value.hpp"

namespace {

using namespace coopnorm;

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kIo = 3, kEmpty = 4 };

struct Globals {
    std::uint64_t seed = 12345;
    std::string config;
    unsigned workers = 1;
};

struct ScenarioFlags {
    ScenarioFields fields;
    CLI::Option* alpha0 = nullptr;
    CLI::Option* alpha1 = nullptr;

    ScenarioFields resolved() const {
        ScenarioFields f = fields;
        if (alpha1 && alpha1->count() > 0) {
            f.alpha1 = alpha1_value;
            f.alpha0 = alpha0 && alpha0->count() > 0 ? alpha0_value : f.alpha;
        } else if (alpha0 && alpha0->count() > 0) {
            f.alpha0 = alpha0_value;
        }
        return f;
    }

    double alpha0_value = 0.0;
    double alpha1_value = 0.0;
};

struct OutputFlags {
    std::string out;
    std::string format = "csv";
    std::string chart;
};

struct SweepFlags {
    std::string param;
    double lo = 0.0;
    double hi = 1.0;
    int points = 0;
    std::string preset;
};

void add_scenario_flags(CLI::App* app, ScenarioFlags& s, bool with_tax) {
    app->add_option("--n", s.fields.n, "number of income types")->check(CLI::Range(2, 1000000));
    app->add_option("--rho", s.fields.rho, "CRRA curvature")->check(CLI::NonNegativeNumber);
    app->add_option("--alpha", s.fields.alpha, "inequality parameter")->check(CLI::NonNegativeNumber);
    s.alpha0 = app->add_option("--alpha0", s.alpha0_value, "inequality today (two-period model)")
                   ->check(CLI::NonNegativeNumber);
    s.alpha1 = app->add_option("--alpha1", s.alpha1_value, "inequality from tomorrow on (two-period model)")
                   ->check(CLI::NonNegativeNumber);
    app->add_option("--beta", s.fields.beta, "norm progressivity")->check(CLI::NonNegativeNumber);
    app->add_option("--m", s.fields.m, "income mobility")->check(CLI::Range(0.0, 1.0));
    app->add_option("--delta", s.fields.delta, "discount factor")
        ->check(CLI::Range(0.0, std::nextafter(1.0, 0.0)));
    if (with_tax) {
        app->add_option("--s", s.fields.s, "cost of public funds")
            ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
    }
}

void add_output_flags(CLI::App* app, OutputFlags& o, bool chart) {
    app->add_option("--out", o.out, "output file (stdout when omitted)");
    app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    if (chart) app->add_option("--chart", o.chart, "also write an SVG chart of the records here");
}

void add_sweep_flags(CLI::App* app, SweepFlags& s) {
    app->add_option("--param", s.param, "swept parameter: m, alpha, alpha1, beta or delta, depending on --kind");
    app->add_option("--lo", s.lo, "lower end of the sweep grid");
    app->add_option("--hi", s.hi, "upper end of the sweep grid");
    app->add_option("--points", s.points, "number of sweep grid points");
}

void emit(const Table& t, const OutputFlags& o) {
    const std::string text = o.format == "json" ? to_json_text(t) : to_csv(t);
    if (o.out.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        write_file(o.out, text);
    }
}

void emit_chart(const Table& t, const OutputFlags& o, const std::string& x, const std::string& y,
                const std::string& group, const std::string& title) {
    if (o.chart.empty()) return;
    ChartOptions opts;
    opts.title = title;
    write_file(o.chart, render_svg(t, x, y, group, opts));
}

SweepSpec sweep_spec(SweepKind kind, const SweepFlags& s, const ScenarioFlags& sc) {
    SweepSpec spec;
    spec.kind = kind;
    spec.param = s.param;
    spec.lo = s.lo;
    spec.hi = s.hi;
    spec.points = s.points;
    spec.fixed = sc.resolved();
    return spec;
}

std::string default_y(SweepKind kind) {
    switch (kind) {
        case SweepKind::Threshold: return "delta_min";
        case SweepKind::Norm: return "beta_star";
        case SweepKind::Tax: return "tau_star";
    }
    return "delta_min";
}

// Values from the --config file fill every flag that was not given on the
// command line. Keys are flag names without the leading dashes.
void apply_config(CLI::App& app, CLI::App* active, const std::string& path) {
    if (path.empty()) return;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError("--config", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "config") continue;
        const std::string flag = "--" + key;
        CLI::Option* opt = active ? active->get_option_no_throw(flag) : nullptr;
        if (!opt) opt = app.get_option_no_throw(flag);
        if (!opt) {
            bool elsewhere = false;
            for (const CLI::App* sub : app.get_subcommands({})) {
                if (sub->get_option_no_throw(flag)) elsewhere = true;
            }
            if (!elsewhere) throw CLI::ValidationError("--config", "unknown key '" + key + "'");
            continue;
        }
        if (opt->count() > 0) continue;
        std::string text;
        if (value.is_string()) text = value.get<std::string>();
        else if (value.is_boolean()) text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_integer()) text = std::to_string(value.get<long long>());
        else if (value.is_number()) text = format_number(value.get<double>());
        else throw CLI::ValidationError(flag, "config value must be a string, number or boolean");
        opt->add_result(text);
        opt->run_callback();
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Cooperation thresholds, contribution norms and optimal taxation under income mobility"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "base seed of the Monte Carlo oracle");
    app.add_option("--config", g.config, "JSON file whose keys are flag names; flags override it");
    app.add_option("--workers", g.workers, "worker threads, 0 for all cores");

    // values
    ScenarioFlags values_sc;
    auto* values_cmd = app.add_subcommand("values", "cooperation, deviation and autarky values per type");
    add_scenario_flags(values_cmd, values_sc, false);
    OutputFlags values_out;
    add_output_flags(values_cmd, values_out, false);

    // threshold
    ScenarioFlags thr_sc;
    auto* thr_cmd = app.add_subcommand("threshold", "minimum discount factor sustaining cooperation");
    add_scenario_flags(thr_cmd, thr_sc, false);
    OutputFlags thr_out;
    add_output_flags(thr_cmd, thr_out, false);
    bool thr_explain = false;
    thr_cmd->add_flag("--explain", thr_explain, "print solver details to stderr");

    // sweep
    ScenarioFlags sw_sc;
    SweepFlags sw;
    OutputFlags sw_out;
    std::string sw_kind = "threshold";
    bool sw_smooth = false;
    auto* sw_cmd = app.add_subcommand("sweep", "parameter sweep or figure preset");
    add_scenario_flags(sw_cmd, sw_sc, true);
    add_sweep_flags(sw_cmd, sw);
    add_output_flags(sw_cmd, sw_out, true);
    sw_cmd->add_option("--kind", sw_kind, "record type")->check(CLI::IsMember({"threshold", "norm", "tax"}));
    sw_cmd->add_option("--preset", sw.preset, "figure preset: fig2, fig2-beta0, fig2-beta1, fig3, fig-norm, fig4");
    sw_cmd->add_flag("--smooth", sw_smooth, "add a smoothed beta_star column to norm sweeps");

    // norm-select
    ScenarioFlags ns_sc;
    SweepFlags ns;
    OutputFlags ns_out;
    NormSearchConfig ns_cfg;
    bool ns_smooth = false;
    int ns_window = 11, ns_order = 3;
    auto* ns_cmd = app.add_subcommand("norm-select", "progressivity minimizing the cooperation threshold");
    add_scenario_flags(ns_cmd, ns_sc, false);
    add_sweep_flags(ns_cmd, ns);
    add_output_flags(ns_cmd, ns_out, true);
    ns_cmd->add_option("--beta-lo", ns_cfg.lo, "lower end of the beta search")->check(CLI::NonNegativeNumber);
    ns_cmd->add_option("--beta-hi", ns_cfg.hi, "upper end of the beta search");
    ns_cmd->add_option("--coarse", ns_cfg.coarse_points, "coarse grid points")->check(CLI::Range(2, 1000000));
    ns_cmd->add_option("--refine", ns_cfg.refine_points, "refine grid points")->check(CLI::Range(2, 1000000));
    ns_cmd->add_flag("--smooth", ns_smooth, "add a smoothed beta_star column (sweeps only)");
    ns_cmd->add_option("--window", ns_window, "smoothing window (odd)")->check(CLI::Range(3, 100001));
    ns_cmd->add_option("--order", ns_order, "smoothing polynomial order")->check(CLI::Range(0, 100000));

    // tax
    ScenarioFlags tax_sc;
    SweepFlags tx;
    OutputFlags tax_out;
    TaxGridConfig tax_cfg;
    auto* tax_cmd = app.add_subcommand("tax", "welfare-maximizing proportional tax");
    add_scenario_flags(tax_cmd, tax_sc, true);
    add_sweep_flags(tax_cmd, tx);
    add_output_flags(tax_cmd, tax_out, true);
    tax_cmd->add_option("--tax-points", tax_cfg.points, "tax grid points")->check(CLI::Range(2, 10000000));
    tax_cmd->add_flag("--golden", tax_cfg.refine, "golden-section refinement of the winning bracket");

    // simulate
    ScenarioFlags sim_sc;
    OutputFlags sim_out;
    SimConfig sim_cfg;
    std::string sim_regime = "all";
    int sim_type = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimates next to the closed-form values");
    add_scenario_flags(sim_cmd, sim_sc, false);
    add_output_flags(sim_cmd, sim_out, false);
    sim_cmd->add_option("--regime", sim_regime, "cooperate, deviate, autarky or all")
        ->check(CLI::IsMember({"cooperate", "deviate", "autarky", "all"}));
    sim_cmd->add_option("--type", sim_type, "1-based type index, 0 for all types")->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--replications", sim_cfg.replications, "replications per estimate")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    sim_cmd->add_option("--horizon", sim_cfg.horizon, "periods per replication, 0 for automatic");
    sim_cmd->add_option("--tolerance", sim_cfg.truncation_tolerance, "truncation tolerance for the automatic horizon")
        ->check(CLI::PositiveNumber);

    // chart
    std::string chart_in, chart_x, chart_y, chart_group, chart_outpath, chart_title;
    auto* chart_cmd = app.add_subcommand("chart", "SVG line chart of a CSV record file");
    chart_cmd->add_option("--in", chart_in, "input CSV")->required();
    chart_cmd->add_option("--x", chart_x, "x column")->required();
    chart_cmd->add_option("--y", chart_y, "y column")->required();
    chart_cmd->add_option("--group", chart_group, "grouping columns, comma separated");
    chart_cmd->add_option("--out", chart_outpath, "output SVG (stdout when omitted)");
    chart_cmd->add_option("--title", chart_title, "chart title");

    try {
        app.parse(argc, argv);
        CLI::App* active = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
        apply_config(app, active, g.config);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (values_cmd->parsed()) {
        const Scenario s = scenario_from(values_sc.resolved());
        const ValueTriple v = values(s);
        Table t({"type", "v_coop", "v_dev", "v_aut", "gap", "gap_normalized"});
        for (std::size_t i = 0; i < s.n(); ++i) {
            const IncentiveGap gap = incentive_gap(s, i);
            t.add_row({static_cast<double>(i + 1), v.v_coop[i], v.v_dev[i], v.v_aut[i], gap.raw, gap.normalized});
        }
        emit(t, values_out);
        return kOk;
    }

    if (thr_cmd->parsed()) {
        const ScenarioFields f = thr_sc.resolved();
        const Table t = threshold_record(f);
        if (thr_explain) {
            ThresholdResult r;
            if (f.alpha1) {
                r = delta_min_two_alpha(*f.alpha0, *f.alpha1, scenario_from(f));
            } else {
                r = delta_min(scenario_from(f));
            }
            std::fprintf(stderr, "method=%s binding_type=%zu sign_changes=%d gap_at_solution=%s\n",
                         to_string(r.method), r.binding_type + 1, r.sign_changes,
                         format_number(r.gap_at_solution).c_str());
        }
        emit(t, thr_out);
        return kOk;
    }

    if (sw_cmd->parsed()) {
        SweepOptions opts;
        opts.workers = g.workers;
        opts.smooth = sw_smooth;
        opts.tax.s = sw_sc.fields.s;
        Table t;
        std::string x, y, group, title;
        if (!sw.preset.empty()) {
            const Preset p = preset(sw.preset);
            t = run_sweeps(p.sweeps, opts);
            x = p.x;
            y = p.y;
            group = p.group;
            title = p.name + ": " + p.description;
        } else {
            if (sw.param.empty()) throw UsageError("--param: required unless --preset is given");
            SweepKind kind = sw_kind == "norm" ? SweepKind::Norm : sw_kind == "tax" ? SweepKind::Tax
                                                                                  : SweepKind::Threshold;
            t = run_sweep(sweep_spec(kind, sw, sw_sc), opts);
            x = sw.param;
            y = default_y(kind);
        }
        if (t.empty()) throw EmptyResultError("sweep produced no records");
        emit(t, sw_out);
        emit_chart(t, sw_out, x, y, group, title);
        return kOk;
    }

    if (ns_cmd->parsed()) {
        const ScenarioFields f = ns_sc.resolved();
        Table t;
        if (ns.param.empty()) {
            const auto r = beta_star(f.alpha, f.m, scenario_from(f), ns_cfg);
            t = Table(norm_columns(false));
            Cell b;
            if (r.beta_star) b = *r.beta_star;
            t.add_row({static_cast<double>(f.n), f.rho, f.m, f.alpha, b, r.delta_min_at_star});
        } else {
            SweepOptions opts;
            opts.workers = g.workers;
            opts.norm = ns_cfg;
            opts.smooth = ns_smooth;
            opts.smooth_window = ns_window;
            opts.smooth_order = ns_order;
            t = run_sweep(sweep_spec(SweepKind::Norm, ns, ns_sc), opts);
        }
        emit(t, ns_out);
        emit_chart(t, ns_out, ns.param.empty() ? "alpha" : ns.param, "beta_star", "", "");
        return kOk;
    }

    if (tax_cmd->parsed()) {
        const ScenarioFields f = tax_sc.resolved();
        Table t;
        tax_cfg.s = f.s;
        if (tx.param.empty()) {
            t = tax_record(f, tax_cfg);
        } else {
            SweepOptions opts;
            opts.workers = g.workers;
            opts.tax = tax_cfg;
            t = run_sweep(sweep_spec(SweepKind::Tax, tx, tax_sc), opts);
        }
        emit(t, tax_out);
        emit_chart(t, tax_out, tx.param.empty() ? "alpha" : tx.param, "tau_star", "", "");
        return kOk;
    }

    if (sim_cmd->parsed()) {
        const Scenario s = scenario_from(sim_sc.resolved());
        if (sim_type > static_cast<int>(s.n())) throw UsageError("--type: exceeds the number of types");
        sim_cfg.seed = g.seed;
        sim_cfg.workers = g.workers;
        const ValueTriple closed = values(s);
        std::vector<SimRegime> regimes;
        if (sim_regime == "cooperate" || sim_regime == "all") regimes.push_back(SimRegime::Cooperate);
        if (sim_regime == "deviate" || sim_regime == "all") regimes.push_back(SimRegime::Deviate);
        if (sim_regime == "autarky" || sim_regime == "all") regimes.push_back(SimRegime::Autarky);
        Table t({"regime", "type", "mean", "std_error", "truncation_bound", "horizon", "closed_form", "within"});
        for (SimRegime r : regimes) {
            for (std::size_t i = 0; i < s.n(); ++i) {
                if (sim_type != 0 && i + 1 != static_cast<std::size_t>(sim_type)) continue;
                const SimEstimate e = estimate_value(r, s, i, sim_cfg);
                const double cf = r == SimRegime::Cooperate ? closed.v_coop[i]
                                  : r == SimRegime::Deviate ? closed.v_dev[i]
                                                            : closed.v_aut[i];
                const bool within = std::abs(cf - e.mean) <= 3.0 * e.std_error + e.truncation_bound;
                t.add_row({std::string(to_string(r)), static_cast<double>(i + 1), e.mean, e.std_error,
                           e.truncation_bound, static_cast<double>(e.horizon), cf, within ? 1.0 : 0.0});
            }
        }
        emit(t, sim_out);
        return kOk;
    }

    if (chart_cmd->parsed()) {
        const Table t = parse_csv(read_file(chart_in));
        ChartOptions opts;
        opts.title = chart_title;
        const std::string svg = render_svg(t, chart_x, chart_y, chart_group, opts);
        if (chart_outpath.empty()) {
            std::cout << svg;
        } else {
            write_file(chart_outpath, svg);
        }
        return kOk;
    }
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const EmptyResultError& e) {
        std::cerr << "empty result: " << e.what() << '\n';
        return kEmpty;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

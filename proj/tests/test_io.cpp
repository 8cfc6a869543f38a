#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "coopnorm/chart.hpp"
#include "coopnorm/errors.hpp"
#include "coopnorm/records.hpp"
#include "coopnorm/sweep.hpp"

using namespace coopnorm;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    return count;
}

Table random_table(std::uint64_t seed, std::size_t rows) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Table t({"a", "b", "label", "maybe"});
    for (std::size_t r = 0; r < rows; ++r) {
        const double a = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        const double b = u(rng);
        Cell maybe;
        if (r % 3 != 0) maybe = u(rng) * 1e5;
        t.add_row({a, b, std::string(r % 2 ? "autarkic" : "cooperative"), maybe});
    }
    return t;
}

SweepSpec threshold_spec() {
    SweepSpec s;
    s.kind = SweepKind::Threshold;
    s.param = "m";
    s.lo = 0.05;
    s.hi = 1.0;
    s.points = 12;
    s.fixed.n = 3;
    s.fixed.alpha = 1.0;
    s.fixed.beta = 1.0;
    return s;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(round_to_serialized(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("table basics") {
    Table t({"x", "y"});
    t.add_row({1.0, std::string("a")});
    CHECK(t.size() == 1);
    CHECK(t.column("y") == 1);
    CHECK(t.number(0, "x") == 1.0);
    CHECK_FALSE(t.number(0, "y").has_value());
    CHECK_THROWS_AS(t.column("z"), UsageError);
    CHECK_THROWS_AS(t.add_row({1.0}), UsageError);
    Table other({"x", "z"});
    CHECK_THROWS_AS(t.append(other), UsageError);
}

TEST_CASE("CSV round trip") {
    const Table t = random_table(3, 200);
    const std::string csv = to_csv(t);
    const Table back = parse_csv(csv);
    REQUIRE(back.columns() == t.columns());
    REQUIRE(back.size() == t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (const auto& col : t.columns()) {
            const Cell& a = t.at(r, col);
            const Cell& b = back.at(r, col);
            REQUIRE(a.index() == b.index());
            if (const double* x = std::get_if<double>(&a)) {
                // Half a unit in the twelfth significant digit.
                CHECK(std::abs(*x - std::get<double>(b)) <= 5e-12 * std::abs(*x));
                CHECK(std::get<double>(b) == round_to_serialized(*x));
            } else {
                CHECK(a == b);
            }
        }
    }
    // Emitting the parsed table reproduces the file byte for byte.
    CHECK(to_csv(back) == csv);
}

TEST_CASE("sweep records round-trip exactly") {
    const Table t = run_sweep(threshold_spec());
    const Table back = parse_csv(to_csv(t));
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (const auto& col : t.columns()) {
            const auto x = t.number(r, col);
            if (x) CHECK(std::abs(*x - *back.number(r, col)) <= 1e-12);
        }
    }
    CHECK(back == t);
}

TEST_CASE("CSV layout and parse errors") {
    Table t({"n", "flag", "note"});
    t.add_row({3.0, std::monostate{}, std::string("cooperative")});
    CHECK(to_csv(t) == "n,flag,note\n3,,cooperative\n");
    Table bad({"x"});
    bad.add_row({std::string("a,b")});
    CHECK_THROWS(to_csv(bad));
    CHECK_THROWS(parse_csv(""));
    CHECK_THROWS(parse_csv("a,b\n1\n"));
}

TEST_CASE("JSON carries the same values as CSV") {
    const Table t = random_table(4, 20);
    const auto j = to_json(t);
    REQUIRE(j["columns"].size() == 4);
    REQUIRE(j["rows"].size() == 20);
    for (std::size_t r = 0; r < t.size(); ++r) {
        const auto& row = j["rows"][r];
        CHECK(row["a"].get<double>() == round_to_serialized(*t.number(r, "a")));
        CHECK(row["label"].get<std::string>() == std::get<std::string>(t.at(r, "label")));
        if (t.number(r, "maybe")) CHECK(row["maybe"].get<double>() == round_to_serialized(*t.number(r, "maybe")));
        else CHECK(row["maybe"].is_null());
    }
    CHECK(to_json_text(t) == to_json_text(parse_csv(to_csv(t))));
    CHECK(to_json_text(t).back() == '\n');
}

TEST_CASE("file helpers report I/O failures") {
    CHECK_THROWS_AS(write_file("/nonexistent-dir/out.csv", "x"), IoError);
    CHECK_THROWS_AS(read_file("/nonexistent-dir/in.csv"), IoError);
}

TEST_CASE("chart: one polyline per group") {
    Table t({"x", "y", "g"});
    for (int g = 0; g < 2; ++g) {
        for (int k = 0; k < 10; ++k) t.add_row({static_cast<double>(k), std::sin(k + g), static_cast<double>(g)});
    }
    const std::string svg = render_svg(t, "x", "y", "g", {"two groups"});
    CHECK(count_of(svg, "<polyline") == 2);
    CHECK(count_of(svg, "<circle") == 0);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("g=0") != std::string::npos);
    CHECK(svg.find("g=1") != std::string::npos);
    CHECK(render_svg(t, "x", "y", "g", {"two groups"}) == svg);
    CHECK(count_of(render_svg(t, "x", "y", ""), "<polyline") == 1);
}

TEST_CASE("chart: single points become markers") {
    Table t({"x", "y", "g"});
    t.add_row({1.0, 2.0, std::string("a")});
    t.add_row({2.0, 3.0, std::string("b")});
    const std::string svg = render_svg(t, "x", "y", "g");
    CHECK(count_of(svg, "<polyline") == 0);
    CHECK(count_of(svg, "<circle") == 2);
}

TEST_CASE("chart: errors") {
    Table empty({"x", "y"});
    CHECK_THROWS_AS(render_svg(empty, "x", "y", ""), EmptyResultError);
    Table text({"x", "y"});
    text.add_row({std::string("a"), std::monostate{}});
    CHECK_THROWS_AS(render_svg(text, "x", "y", ""), EmptyResultError);
    CHECK_THROWS_AS(render_svg(text, "x", "nope", ""), UsageError);
}

TEST_CASE("sweep specifications") {
    SweepSpec s = threshold_spec();
    CHECK_NOTHROW(s.validate());
    CHECK(s.value_at(0) == 0.05);
    CHECK(s.value_at(11) == 1.0);
    s.param = "tau";
    CHECK_THROWS_AS(s.validate(), UsageError);
    s.param = "rho";
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = threshold_spec();
    s.points = 1;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = threshold_spec();
    s.lo = 1.0;
    s.hi = 0.5;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = threshold_spec();
    s.kind = SweepKind::Norm;
    s.param = "beta";
    CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("threshold sweep: columns, order and determinism") {
    const SweepSpec spec = threshold_spec();
    const Table one = run_sweep(spec);
    CHECK(to_csv(one).rfind("n,rho,alpha,alpha0,alpha1,beta,m,delta_min,sustainable\n", 0) == 0);
    REQUIRE(one.size() == 12);
    double prev = 2.0;
    for (std::size_t r = 0; r < one.size(); ++r) {
        CHECK(*one.number(r, "m") == doctest::Approx(spec.value_at(static_cast<int>(r))));
        const double d = *one.number(r, "delta_min");
        CHECK(d < prev);
        prev = d;
        const double flag = *one.number(r, "sustainable");
        CHECK((flag == 0.0 || flag == 1.0));
        CHECK(std::holds_alternative<std::monostate>(one.at(r, "alpha0")));
    }
    SweepOptions many;
    many.workers = 4;
    CHECK(to_csv(run_sweep(spec, many)) == to_csv(one));
}

TEST_CASE("two-period threshold sweep fills alpha0 and alpha1") {
    SweepSpec spec = threshold_spec();
    spec.param = "alpha1";
    spec.lo = 0.6;
    spec.hi = 3.0;
    spec.points = 5;
    spec.fixed.n = 5;
    spec.fixed.alpha = 0.5;
    spec.fixed.beta = 4.0;
    const Table t = run_sweep(spec);
    for (std::size_t r = 0; r < t.size(); ++r) {
        CHECK(std::holds_alternative<std::monostate>(t.at(r, "alpha")));
        CHECK(*t.number(r, "alpha0") == 0.5);
        CHECK(*t.number(r, "alpha1") == doctest::Approx(spec.value_at(static_cast<int>(r))));
    }
}

TEST_CASE("tax and norm sweep headers") {
    SweepSpec tax;
    tax.kind = SweepKind::Tax;
    tax.param = "alpha";
    tax.lo = 0.0;
    tax.hi = 2.0;
    tax.points = 3;
    tax.fixed.rho = 0.5;
    tax.fixed.delta = 0.7;
    SweepOptions opts;
    opts.tax.points = 21;
    const Table t = run_sweep(tax, opts);
    CHECK(to_csv(t).rfind("n,rho,s,delta,m,beta,alpha,tau_star,tau_dagger,tau_a,regime,welfare\n", 0) == 0);
    for (std::size_t r = 0; r < t.size(); ++r) CHECK(std::get<std::string>(t.at(r, "regime")) == "autarkic");

    SweepSpec norm;
    norm.kind = SweepKind::Norm;
    norm.param = "alpha";
    norm.lo = 0.2;
    norm.hi = 0.4;
    norm.points = 2;
    opts.norm.coarse_points = 10;
    opts.norm.refine_points = 10;
    CHECK(to_csv(run_sweep(norm, opts)).rfind("n,rho,m,alpha,beta_star,delta_min_at_star\n", 0) == 0);
}

TEST_CASE("smoothed norm series equals the raw series on a constant segment") {
    SweepSpec norm;
    norm.kind = SweepKind::Norm;
    norm.param = "alpha";
    norm.lo = 0.8;
    norm.hi = 1.5;
    norm.points = 11;
    norm.fixed.n = 6;
    norm.fixed.rho = 4.0;
    norm.fixed.m = 0.4;
    SweepOptions opts;
    opts.smooth = true;
    opts.norm.coarse_points = 20;
    opts.norm.refine_points = 20;
    const Table t = run_sweep(norm, opts);
    REQUIRE(t.has_column("beta_star_smoothed"));
    const double first = *t.number(0, "beta_star");
    for (std::size_t r = 0; r < t.size(); ++r) {
        REQUIRE(*t.number(r, "beta_star") == first);
        CHECK(std::abs(*t.number(r, "beta_star_smoothed") - first) <= 1e-12);
    }
}

TEST_CASE("presets") {
    for (const auto& name : preset_names()) {
        const Preset p = preset(name);
        CHECK_FALSE(p.sweeps.empty());
        for (const auto& s : p.sweeps) CHECK_NOTHROW(s.validate());
    }
    CHECK(preset("fig2").sweeps.size() == 8);
    CHECK(preset("fig2-beta0").sweeps.front().fixed.beta == 0.0);
    CHECK(preset("fig2-beta1").sweeps.front().fixed.beta == 1.0);
    const Preset fig3 = preset("fig3");
    CHECK(fig3.sweeps.size() == 6);
    CHECK(fig3.sweeps.front().fixed.n == 5);
    CHECK(*fig3.sweeps.front().fixed.alpha0 == 0.5);
    CHECK(fig3.sweeps.front().points == 50);
    CHECK_THROWS_AS(preset("fig9"), UsageError);
}

}  // TEST_SUITE

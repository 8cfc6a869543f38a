#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopnorm/fiscal.hpp"
#include "coopnorm/norm_select.hpp"
#include "coopnorm/records.hpp"

namespace coopnorm {

enum class SweepKind { Threshold, Norm, Tax };

const char* to_string(SweepKind k);

/// Scenario fields held fixed during a sweep. alpha0/alpha1, when set, switch
/// threshold sweeps to the two-period inequality model.
struct ScenarioFields {
    int n = 3;
    double rho = 1.0;
    double alpha = 1.0;
    std::optional<double> alpha0;
    std::optional<double> alpha1;
    double beta = 0.0;
    double m = 0.5;
    double delta = 0.5;
    double s = 0.09;
};

struct SweepSpec {
    SweepKind kind = SweepKind::Threshold;
    std::string param = "m";
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    ScenarioFields fixed;

    /// Throws UsageError naming the offending field.
    void validate() const;
    double value_at(int k) const;
    /// The fixed fields with the swept parameter set to its k-th grid value.
    ScenarioFields fields_at(int k) const;
};

struct SweepOptions {
    unsigned workers = 1;
    NormSearchConfig norm;
    TaxGridConfig tax;
    /// Adds a Savitzky-Golay smoothed beta_star column to norm sweeps.
    bool smooth = false;
    int smooth_window = 11;
    int smooth_order = 3;
};

/// Names the parameters a kind of sweep accepts.
std::vector<std::string> sweepable_params(SweepKind kind);

std::vector<std::string> threshold_columns();
std::vector<std::string> norm_columns(bool smoothed);
std::vector<std::string> tax_columns();

/// One record per grid point, in grid order.
Table run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

/// Concatenation of several sweeps of the same kind.
Table run_sweeps(const std::vector<SweepSpec>& specs, const SweepOptions& opts = {});

/// Scenario implied by the fields (single-alpha distribution).
Scenario scenario_from(const ScenarioFields& f);

/// Single records, as produced by the sweeps.
Table threshold_record(const ScenarioFields& f, const SolverOptions& solver = {});
Table tax_record(const ScenarioFields& f, const TaxGridConfig& cfg);

struct Preset {
    std::string name;
    std::string description;
    /// Column pair and grouping used when the preset is charted.
    std::string x, y, group;
    std::vector<SweepSpec> sweeps;
};

std::vector<std::string> preset_names();
/// Throws UsageError for unknown names.
Preset preset(const std::string& name);

}  // namespace coopnorm

#pragma once

#include "eie/boundary_fit.hpp"
#include "eie/conductivity.hpp"
#include "eie/execution.hpp"
#include "eie/piecewise.hpp"
#include "eie/pseudoanalytic.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eie {

enum class SigmaMode { exact_separable, piecewise };

/// Numerical parameters of a run. Defaults match the reference experiments.
struct Params {
    int powers = 10;        // N: highest formal exponent
    int rays = 1000;        // R: boundary samples / quadrature rays
    int ray_nodes = 1001;   // P: nodes per ray
    int strips = 1001;      // M: piecewise strips
    double k_const = 60.0;  // K: strip constant
    int line_samples = 1000;
    int pair_parity = 0;    // trace pair: 0 or 1
};

/// Throws ValidationError when any parameter violates a module precondition.
void validate(const Params& p);

struct Scenario {
    std::string tag;
    std::string description;
    std::string conductivity_id;
    SigmaMode mode = SigmaMode::exact_separable;
    Params params;
    double paper_error = 0.0; // reference value of E for regression banding
};

/// The eight boundary-fit experiments: exp-sep, lorentz-sep (exact separable)
/// and exp-pw, lorentz-pw, expxy-pw, lorentzxy-pw, poly-pw, sin-pw.
const std::vector<Scenario>& scenario_registry();

/// sigma == 1 self-test pipeline (hidden; not part of the registry).
const Scenario& self_test_scenario();

/// Registry lookup including the self-test tag. Throws on unknown tags.
const Scenario& find_scenario(const std::string& tag);

struct Overrides {
    std::optional<int> powers, rays, ray_nodes, strips, line_samples, pair_parity;
    std::optional<double> k_const;
    bool least_squares = false;
};

Params apply_overrides(const Params& base, const Overrides& o);

/// The conductivity of a scenario in evaluator form: exact separable factors
/// or the factors of a freshly built piecewise approximation (returned too so
/// it outlives the evaluator).
struct BuiltSigma {
    FactorField factors;
    std::shared_ptr<const PiecewiseSeparableConductivity> piecewise; // null in exact mode
    const AnalyticConductivity* model = nullptr;
};
BuiltSigma build_sigma(const Scenario& scenario, const Params& params,
                       Execution exec = Execution::parallel);

struct StageTimings {
    double pairs = 0.0, powers = 0.0, gs = 0.0, fit = 0.0; // seconds
};

struct ScenarioReport {
    Scenario scenario; // params are the effective ones after overrides
    FitResult fit;
    std::vector<TraceProvenance> provenance; // one entry per alpha
    double gram_defect = 0.0;
    double paper_error = 0.0;
    double error_ratio = 0.0; // E / paper_error
    bool piecewise_applicable = false;
    DeviationStats piecewise_stats{};
    double oracle_residual_h = 0.0;  // FD residual of the source pair, h = 1e-2
    double oracle_residual_h2 = 0.0; // and h = 5e-3
    double oracle_ratio = 0.0;
    StageTimings timings;
    /// Boundary formal powers of the run, kept for CSV dumps.
    std::optional<FormalPowerSet> powers;
    std::shared_ptr<const PiecewiseSeparableConductivity> piecewise;
};

/// Full pipeline: conductivity, both generating pairs, formal powers to N,
/// boundary traces, orthonormal system, collocation fit against the exact
/// solution, absolute error. Errors are rethrown with the failing stage and
/// scenario named.
ScenarioReport run_scenario(const std::string& tag, const Overrides& overrides = {},
                            Execution exec = Execution::parallel);

/// Max over a 101x101 interior grid (disk of radius 1-2h) of the divergence
/// residual sigma_x u_x + sigma_y u_y + sigma (u_xx + u_yy), every derivative
/// a central difference of step h. Second-order exact pairs drive it to zero
/// at O(h^2).
double fd_conductivity_residual(const ScalarField& sigma, const ScalarField& u, double h,
                                Execution exec = Execution::parallel);

/// Report JSON (stable keys: scenario, params, alpha, error, paper_error,
/// error_ratio, residuals, condition_estimate, timings). Everything except
/// "timings" is deterministic for fixed parameters.
std::string report_json(const ScenarioReport& report);

/// Writes <tag>_report.json and/or the CSV pair <tag>_coefficients.csv
/// (k,n,coeff,alpha) and <tag>_boundary.csv (theta,condition,reconstruction,
/// pointwise_error). format: "json", "csv" or "both".
void emit_report(const ScenarioReport& report, const std::string& format,
                 const std::string& out_dir);

/// Boundary values of every formal power as CSV: theta,n,coeff,re,im.
void dump_powers_csv(const FormalPowerSet& powers, const std::string& path);

} // namespace eie

#include "eie/experiments.hpp"

#include "eie/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace eie {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario make_scenario(std::string tag, std::string description, std::string id, SigmaMode mode,
                       double paper_error) {
    Scenario s;
    s.tag = std::move(tag);
    s.description = std::move(description);
    s.conductivity_id = std::move(id);
    s.mode = mode;
    s.paper_error = paper_error;
    return s;
}

} // namespace

void validate(const Params& p) {
    if (p.powers < 0) throw ValidationError("N (formal exponents) must be >= 0");
    if (p.rays < 8) throw ValidationError("R (rays) must be >= 8");
    if (p.ray_nodes < 2) throw ValidationError("P (ray nodes) must be >= 2");
    if (p.strips < 3 || p.strips % 2 == 0)
        throw ValidationError("M (strips) must be odd and >= 3");
    if (!(p.k_const > 1.0)) throw ValidationError("K must exceed 1");
    if (p.line_samples < 2) throw ValidationError("line samples must be >= 2");
    if (p.pair_parity != 0 && p.pair_parity != 1)
        throw ValidationError("pair parity must be 0 or 1");
}

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> registry = {
        make_scenario("exp-sep", "separable exponential conductivity", "exp",
                      SigmaMode::exact_separable, 2.006e-8),
        make_scenario("lorentz-sep", "separable Lorentzian conductivity", "lorentz",
                      SigmaMode::exact_separable, 2.15e-2),
        make_scenario("exp-pw", "piecewise fit of the exponential conductivity", "exp",
                      SigmaMode::piecewise, 3.4e-3),
        make_scenario("lorentz-pw", "piecewise fit of the Lorentzian conductivity", "lorentz",
                      SigmaMode::piecewise, 10.2e-3),
        make_scenario("expxy-pw", "piecewise fit of exp(xy)", "expxy", SigmaMode::piecewise,
                      8.948e-4),
        make_scenario("lorentzxy-pw", "piecewise fit of 1/((x+y)^2+1)", "lorentzxy",
                      SigmaMode::piecewise, 1.4e-3),
        make_scenario("poly-pw", "piecewise fit of x+y+10", "poly", SigmaMode::piecewise, 9.8e-3),
        make_scenario("sin-pw", "piecewise fit of 1+sin(xy)", "sin", SigmaMode::piecewise,
                      7.694e-4),
    };
    return registry;
}

const Scenario& self_test_scenario() {
    static const Scenario s =
        make_scenario("const", "sigma == 1 self-test", "const", SigmaMode::exact_separable, 0.0);
    return s;
}

const Scenario& find_scenario(const std::string& tag) {
    for (const auto& s : scenario_registry())
        if (s.tag == tag) return s;
    if (tag == self_test_scenario().tag) return self_test_scenario();
    throw ValidationError("unknown scenario tag: " + tag);
}

Params apply_overrides(const Params& base, const Overrides& o) {
    Params p = base;
    if (o.powers) p.powers = *o.powers;
    if (o.rays) p.rays = *o.rays;
    if (o.ray_nodes) p.ray_nodes = *o.ray_nodes;
    if (o.strips) p.strips = *o.strips;
    if (o.line_samples) p.line_samples = *o.line_samples;
    if (o.pair_parity) p.pair_parity = *o.pair_parity;
    if (o.k_const) p.k_const = *o.k_const;
    return p;
}

BuiltSigma build_sigma(const Scenario& scenario, const Params& params, Execution exec) {
    BuiltSigma built;
    built.model = &catalog_entry(scenario.conductivity_id);
    if (scenario.mode == SigmaMode::exact_separable) {
        if (!built.model->separable_factors)
            throw ValidationError("scenario " + scenario.tag +
                                  ": conductivity has no exact separable factors");
        const SeparableFactors1D f = *built.model->separable_factors;
        built.factors = [f](double x, double y) {
            return std::pair<double, double>(f.sigma1(x), f.sigma2(y));
        };
    } else {
        auto pw = std::make_shared<const PiecewiseSeparableConductivity>(build_piecewise(
            built.model->sigma, params.strips, params.k_const, params.line_samples, exec));
        built.piecewise = pw;
        built.factors = [pw](double x, double y) { return pw->factors(x, y); };
    }
    return built;
}

ScenarioReport run_scenario(const std::string& tag, const Overrides& overrides, Execution exec) {
    const Scenario& base = find_scenario(tag);
    Params params = apply_overrides(base.params, overrides);
    validate(params);

    ScenarioReport report;
    report.scenario = base;
    report.scenario.params = params;
    report.paper_error = base.paper_error;

    auto stage = [&](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const ValidationError& e) {
            throw ValidationError("scenario " + tag + ", stage " + name + ": " + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError("scenario " + tag + ", stage " + name + ": " + e.what());
        }
    };

    const BuiltSigma sigma = stage("conductivity", [&] { return build_sigma(base, params, exec); });
    report.piecewise = sigma.piecewise;

    const RayLattice lattice(params.rays, params.ray_nodes);

    auto t0 = std::chrono::steady_clock::now();
    const GeneratingPairField pair0 =
        stage("pairs", [&] { return build_pair(sigma.factors, 0, lattice, exec); });
    const GeneratingPairField pair1 =
        stage("pairs", [&] { return build_pair(sigma.factors, 1, lattice, exec); });
    report.timings.pairs = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    report.powers = stage("powers", [&] {
        return formal_powers(pair0, pair1, params.powers, PowerStorage::boundary_only,
                             params.pair_parity, exec);
    });
    report.timings.powers = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const TraceSet traces = stage("traces", [&] { return boundary_traces(*report.powers); });
    const OrthonormalSystem system = stage("gs", [&] { return orthonormalize(traces); });
    report.gram_defect = gram_defect(system);
    report.timings.gs = seconds_since(t0);

    const AnalyticConductivity& model = *sigma.model;
    const BoundaryConditionFn condition = [&model](double theta) {
        return boundary_condition(model, theta);
    };

    t0 = std::chrono::steady_clock::now();
    FitOptions opts;
    opts.least_squares_all_samples = overrides.least_squares;
    report.fit = stage("fit", [&] { return collocation_fit(system, condition, opts); });
    report.timings.fit = seconds_since(t0);

    report.provenance = system.provenance;
    report.error_ratio = report.paper_error > 0.0 ? report.fit.error / report.paper_error : 0.0;

    if (sigma.piecewise) {
        report.piecewise_applicable = true;
        report.piecewise_stats = deviation_stats(*sigma.piecewise, model.sigma, 300);
    }

    report.oracle_residual_h = fd_conductivity_residual(model.sigma, model.exact_u, 1e-2, exec);
    report.oracle_residual_h2 = fd_conductivity_residual(model.sigma, model.exact_u, 5e-3, exec);
    report.oracle_ratio = report.oracle_residual_h2 > 0.0
                              ? report.oracle_residual_h / report.oracle_residual_h2
                              : 0.0;
    return report;
}

double fd_conductivity_residual(const ScalarField& sigma, const ScalarField& u, double h,
                                Execution exec) {
    if (!(h > 0.0) || h >= 0.1)
        throw ValidationError("FD residual step must satisfy 0 < h < 0.1");
    const int res = 101;
    const double r_max = 1.0 - 2.0 * h;
    const double r2_max = r_max * r_max;

    double worst = 0.0;
    auto row_max = [&](int j) {
        const double y = -r_max + 2.0 * r_max * j / (res - 1);
        double local = 0.0;
        for (int i = 0; i < res; ++i) {
            const double x = -r_max + 2.0 * r_max * i / (res - 1);
            if (x * x + y * y > r2_max) continue;
            const double sc = sigma(x, y);
            const double sx = (sigma(x + h, y) - sigma(x - h, y)) / (2.0 * h);
            const double sy = (sigma(x, y + h) - sigma(x, y - h)) / (2.0 * h);
            const double uc = u(x, y);
            const double uxp = u(x + h, y), uxm = u(x - h, y);
            const double uyp = u(x, y + h), uym = u(x, y - h);
            const double ux = (uxp - uxm) / (2.0 * h);
            const double uy = (uyp - uym) / (2.0 * h);
            const double uxx = (uxp - 2.0 * uc + uxm) / (h * h);
            const double uyy = (uyp - 2.0 * uc + uym) / (h * h);
            const double r = sx * ux + sy * uy + sc * (uxx + uyy);
            local = std::max(local, std::abs(r));
        }
        return local;
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) reduction(max : worst)
        for (int j = 0; j < res; ++j) worst = std::max(worst, row_max(j));
    } else {
        for (int j = 0; j < res; ++j) worst = std::max(worst, row_max(j));
    }
    return worst;
}

namespace {

nlohmann::json report_data_json(const ScenarioReport& r) {
    nlohmann::json j;
    j["scenario"] = r.scenario.tag;
    j["params"] = {{"N", r.scenario.params.powers},
                   {"R", r.scenario.params.rays},
                   {"P", r.scenario.params.ray_nodes},
                   {"M", r.scenario.params.strips},
                   {"K", r.scenario.params.k_const},
                   {"n_samples", r.scenario.params.line_samples},
                   {"pair_parity", r.scenario.params.pair_parity}};
    nlohmann::json alpha = nlohmann::json::array();
    for (std::size_t k = 0; k < r.fit.alpha.size(); ++k) {
        alpha.push_back({{"k", k},
                         {"n", r.provenance[k].n},
                         {"coeff", r.provenance[k].coeff == 0 ? "1" : "i"},
                         {"value", r.fit.alpha[k]}});
    }
    j["alpha"] = std::move(alpha);
    j["error"] = r.fit.error;
    j["paper_error"] = r.paper_error;
    j["error_ratio"] = r.error_ratio;
    j["residuals"] = r.fit.collocation_residuals;
    j["condition_estimate"] = r.fit.condition_estimate;
    j["gram_defect"] = r.gram_defect;
    j["ill_conditioned"] = r.fit.ill_conditioned;
    j["least_squares"] = r.fit.used_least_squares;
    if (r.piecewise_applicable)
        j["piecewise"] = {{"max_rel_deviation", r.piecewise_stats.max_rel_deviation},
                          {"min_value", r.piecewise_stats.min_value}};
    j["oracle"] = {{"residual_h", r.oracle_residual_h},
                   {"residual_h_half", r.oracle_residual_h2},
                   {"ratio", r.oracle_ratio}};
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string report_json(const ScenarioReport& report) {
    nlohmann::json j = report_data_json(report);
    j["timings"] = {{"pairs", report.timings.pairs},
                    {"powers", report.timings.powers},
                    {"gs", report.timings.gs},
                    {"fit", report.timings.fit}};
    return j.dump(2) + "\n";
}

void emit_report(const ScenarioReport& report, const std::string& format,
                 const std::string& out_dir) {
    if (format != "json" && format != "csv" && format != "both")
        throw ValidationError("report format must be json, csv or both");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::string base = out_dir + "/" + report.scenario.tag;

    if (format == "json" || format == "both")
        write_text_file(base + "_report.json", report_json(report));

    if (format == "csv" || format == "both") {
        std::string coeffs = "k,n,coeff,alpha\n";
        for (std::size_t k = 0; k < report.fit.alpha.size(); ++k) {
            coeffs += std::to_string(k) + "," + std::to_string(report.provenance[k].n) + "," +
                      (report.provenance[k].coeff == 0 ? "1" : "i") + "," +
                      fmt(report.fit.alpha[k]) + "\n";
        }
        write_text_file(base + "_coefficients.csv", coeffs);

        // Boundary comparison on the same 1000-point grid the error uses.
        // The reconstruction is the fitted combination; rebuilding it from the
        // stored powers keeps this writer self-contained.
        if (report.powers) {
            const TraceSet traces = boundary_traces(*report.powers);
            const OrthonormalSystem system = orthonormalize(traces);
            const AnalyticConductivity& model = catalog_entry(report.scenario.conductivity_id);

            BoundaryTrace combined(report.powers->lattice.rays, 0.0);
            for (std::size_t k = 0; k < system.members.size(); ++k)
                for (std::size_t r = 0; r < combined.size(); ++r)
                    combined[r] += report.fit.alpha[k] * system.members[k][r];
            const PeriodicCubicSpline spline(combined, kTwoPi);

            std::string rows = "theta,condition,reconstruction,pointwise_error\n";
            for (int i = 0; i < 1000; ++i) {
                const double theta = kTwoPi * i / 1000.0;
                const double cond = boundary_condition(model, theta);
                const double rec = spline(theta);
                rows += fmt(theta) + "," + fmt(cond) + "," + fmt(rec) + "," + fmt(rec - cond) +
                        "\n";
            }
            write_text_file(base + "_boundary.csv", rows);
        }
    }
}

void dump_powers_csv(const FormalPowerSet& powers, const std::string& path) {
    std::string rows = "theta,n,coeff,re,im\n";
    for (int n = 0; n <= powers.max_exponent; ++n) {
        for (int c = 0; c < 2; ++c) {
            for (int r = 0; r < powers.lattice.rays; ++r) {
                const Complex z = powers.boundary_value(n, c, r);
                rows += fmt(powers.lattice.theta(r)) + "," + std::to_string(n) + "," +
                        (c == 0 ? "1" : "i") + "," + fmt(z.real()) + "," + fmt(z.imag()) + "\n";
            }
        }
    }
    write_text_file(path, rows);
}

} // namespace eie

#include "eie/experiments.hpp"

#include "eie/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace eie;

namespace {

// Small-lattice overrides keep unit runs fast; accuracy-critical checks at
// full scale live in the acceptance suite.
Overrides small_run() {
    Overrides o;
    o.rays = 64;
    o.ray_nodes = 201;
    o.strips = 101;
    o.line_samples = 200;
    return o;
}

} // namespace

TEST_CASE("registry lists the eight experiments with their reference errors") {
    const auto& reg = scenario_registry();
    REQUIRE(reg.size() == 8);

    CHECK(reg[0].tag == "exp-sep");
    CHECK(reg[0].paper_error == doctest::Approx(2.006e-8));
    CHECK(reg[0].mode == SigmaMode::exact_separable);
    CHECK(reg[1].tag == "lorentz-sep");
    CHECK(reg[1].paper_error == doctest::Approx(2.15e-2));
    CHECK(reg[2].tag == "exp-pw");
    CHECK(reg[2].paper_error == doctest::Approx(3.4e-3));
    CHECK(reg[3].tag == "lorentz-pw");
    CHECK(reg[3].paper_error == doctest::Approx(10.2e-3));
    CHECK(reg[4].tag == "expxy-pw");
    CHECK(reg[4].paper_error == doctest::Approx(8.948e-4));
    CHECK(reg[5].tag == "lorentzxy-pw");
    CHECK(reg[5].paper_error == doctest::Approx(1.4e-3));
    CHECK(reg[6].tag == "poly-pw");
    CHECK(reg[6].paper_error == doctest::Approx(9.8e-3));
    CHECK(reg[7].tag == "sin-pw");
    CHECK(reg[7].paper_error == doctest::Approx(7.694e-4));

    for (const auto& s : reg) {
        CHECK(s.params.powers == 10);
        CHECK(s.params.rays == 1000);
        CHECK(s.params.ray_nodes == 1001);
        CHECK(s.params.strips == 1001);
        CHECK(s.params.k_const == 60.0);
        CHECK(s.params.line_samples == 1000);
        CHECK(s.params.pair_parity == 0);
        if (s.mode == SigmaMode::exact_separable)
            CHECK(catalog_entry(s.conductivity_id).separable_factors.has_value());
    }

    CHECK_THROWS_AS(find_scenario("missing"), ValidationError);
    CHECK(find_scenario("const").conductivity_id == "const");
}

TEST_CASE("FD divergence residual: convergence order on every catalog pair") {
    for (const auto& m : catalog()) {
        const double r1 = fd_conductivity_residual(m.sigma, m.exact_u, 1e-2);
        const double r2 = fd_conductivity_residual(m.sigma, m.exact_u, 5e-3);
        const double ratio = r1 / r2;
        CHECK_MESSAGE(ratio > 3.2, m.id, " ratio=", ratio);
        CHECK_MESSAGE(ratio < 4.8, m.id, " ratio=", ratio);
    }
}

TEST_CASE("FD divergence residual: exact cases and validation") {
    const auto& c = constant_model();
    CHECK(fd_conductivity_residual(c.sigma, c.exact_u, 1e-3) < 1e-10);

    const auto& e = catalog_entry("exp");
    CHECK(fd_conductivity_residual(e.sigma, e.exact_u, 1e-3) < 1e-5); // O(h^2)

    CHECK_THROWS_AS(fd_conductivity_residual(e.sigma, e.exact_u, 0.1), ValidationError);
    CHECK_THROWS_AS(fd_conductivity_residual(e.sigma, e.exact_u, 0.0), ValidationError);
}

TEST_CASE("FD divergence residual: serial equals parallel") {
    const auto& m = catalog_entry("sin");
    const double rs = fd_conductivity_residual(m.sigma, m.exact_u, 1e-2, Execution::serial);
    const double rp = fd_conductivity_residual(m.sigma, m.exact_u, 1e-2, Execution::parallel);
    CHECK(rs == rp);
}

TEST_CASE("running a separable scenario produces a coherent report") {
    const auto report = run_scenario("exp-sep", small_run());
    CHECK(report.scenario.params.rays == 64);
    CHECK(report.fit.error > 0.0);
    CHECK(report.fit.alpha.size() == 21);
    CHECK(report.provenance.size() == 21);
    CHECK(report.provenance[0].n == 0);
    CHECK(report.provenance[11].n == 1);
    CHECK(report.provenance[11].coeff == 1);
    CHECK(report.gram_defect < 1e-8);
    CHECK(report.error_ratio == doctest::Approx(report.fit.error / 2.006e-8));
    CHECK(!report.piecewise_applicable);
    CHECK(report.oracle_ratio > 3.0);
    CHECK(report.oracle_ratio < 5.0);
    CHECK(report.timings.powers >= 0.0);
}

TEST_CASE("running a piecewise scenario attaches deviation statistics") {
    const auto report = run_scenario("expxy-pw", small_run());
    CHECK(report.piecewise_applicable);
    CHECK(report.piecewise_stats.min_value > 0.0);
    CHECK(report.piecewise_stats.max_rel_deviation < 0.1);
    CHECK(report.fit.error > 0.0);
    REQUIRE(report.piecewise);
    CHECK(report.piecewise->decomposition().strip_count == 101);
}

TEST_CASE("override validation happens before any computation") {
    Overrides bad = small_run();
    bad.strips = 4;
    CHECK_THROWS_AS(run_scenario("exp-pw", bad), ValidationError);
    bad = small_run();
    bad.pair_parity = 2;
    CHECK_THROWS_AS(run_scenario("exp-sep", bad), ValidationError);
}

TEST_CASE("N = 0 fit equals the single-member interpolation at theta = 0") {
    Overrides o = small_run();
    o.powers = 0;
    const auto r0 = run_scenario("exp-sep", o);
    REQUIRE(r0.fit.alpha.size() == 1);

    // Independent route: alpha must interpolate the condition at theta = 0
    // through the single orthonormal member.
    const auto& model = catalog_entry("exp");
    const TraceSet traces = boundary_traces(*r0.powers);
    const auto sys = orthonormalize(traces);
    const double alpha_direct =
        boundary_condition(model, 0.0) / evaluate_trace(sys.members[0], 0.0);
    CHECK(r0.fit.alpha[0] == doctest::Approx(alpha_direct).epsilon(1e-10));

    const auto r10 = run_scenario("exp-sep", small_run());
    CHECK(r0.fit.error > r10.fit.error);
}

TEST_CASE("separable beats piecewise for the exponential model at equal parameters") {
    Overrides o = small_run();
    o.strips = 201;
    const double e_sep = run_scenario("exp-sep", o).fit.error;
    const double e_pw = run_scenario("exp-pw", o).fit.error;
    CHECK(e_sep < e_pw);
}

TEST_CASE("report JSON carries the stable schema") {
    const auto report = run_scenario("exp-sep", small_run());
    const auto j = nlohmann::json::parse(report_json(report));
    for (const char* key : {"scenario", "params", "alpha", "error", "paper_error", "error_ratio",
                            "residuals", "condition_estimate", "timings"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(j["scenario"] == "exp-sep");
    CHECK(j["params"]["N"] == 10);
    CHECK(j["params"]["R"] == 64);
    CHECK(j["alpha"].size() == 21);
    CHECK(j["alpha"][0]["n"] == 0);
    CHECK(j["alpha"][0]["coeff"] == "1");
    CHECK(j["residuals"].size() == 21);
    CHECK(j["timings"].contains("powers"));
}

TEST_CASE("report emission writes JSON and CSV files") {
    const auto report = run_scenario("exp-sep", small_run());
    const auto dir = std::filesystem::temp_directory_path() / "eie_report_test";
    std::filesystem::remove_all(dir);
    emit_report(report, "both", dir.string());

    std::ifstream json_in(dir / "exp-sep_report.json");
    REQUIRE(json_in.good());
    nlohmann::json j;
    json_in >> j;
    CHECK(j["error"] == report.fit.error);

    std::ifstream coeff_in(dir / "exp-sep_coefficients.csv");
    REQUIRE(coeff_in.good());
    std::string line;
    std::getline(coeff_in, line);
    CHECK(line == "k,n,coeff,alpha");
    std::getline(coeff_in, line);
    CHECK(line.rfind("0,0,1,", 0) == 0); // alpha_0 descends from (n=0, coeff 1)
    int rows = 1;
    while (std::getline(coeff_in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 21);

    std::ifstream bnd_in(dir / "exp-sep_boundary.csv");
    REQUIRE(bnd_in.good());
    std::getline(bnd_in, line);
    CHECK(line == "theta,condition,reconstruction,pointwise_error");
    rows = 0;
    while (std::getline(bnd_in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1000);

    CHECK_THROWS_AS(emit_report(report, "yaml", dir.string()), ValidationError);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(emit_report(report, "json", "/proc/no-such-dir/reports"), IoError);
}

TEST_CASE("powers CSV dump") {
    const auto report = run_scenario("exp-sep", small_run());
    const auto path = std::filesystem::temp_directory_path() / "eie_powers_test.csv";
    REQUIRE(report.powers.has_value());
    dump_powers_csv(*report.powers, path.string());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,n,coeff,re,im");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 11 * 2 * 64);
    std::filesystem::remove(path);
}

TEST_CASE("identical runs produce identical data sections") {
    auto strip_timings = [](const std::string& text) {
        auto j = nlohmann::json::parse(text);
        j.erase("timings");
        return j.dump();
    };
    const auto a = run_scenario("lorentz-pw", small_run());
    const auto b = run_scenario("lorentz-pw", small_run());
    CHECK(strip_timings(report_json(a)) == strip_timings(report_json(b)));
}

TEST_CASE("self-test scenario runs end to end") {
    Overrides o = small_run();
    o.rays = 1000; // the error grid reads the traces through their splines
    const auto report = run_scenario("const", o);
    // sigma == 1 with u = x: the condition cos(theta) lies in the span, so the
    // fit is exact to roundoff.
    CHECK(report.fit.error < 1e-8);
    CHECK(report.error_ratio == 0.0);
}

// Command-line front end: list the experiment registry, run scenarios with
// optional parameter overrides, or sweep one parameter and collect the error
// curve. Exit codes: 0 ok, 1 validation, 2 numerical failure, 3 I/O.

#include "eie/errors.hpp"
#include "eie/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonFlags {
    std::vector<std::string> scenarios;
    bool all = false;
    std::optional<int> powers, rays, ray_nodes, strips, line_samples, pair_parity;
    std::optional<double> k_const;
    bool least_squares = false;
    bool serial = false;
    std::string out_dir = "out";
    std::string format = "json";
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--scenario", f.scenarios, "Scenario tag(s); see `list`");
    cmd->add_flag("--all", f.all, "Run every registry scenario");
    cmd->add_option("--powers", f.powers, "N: highest formal exponent (default 10)");
    cmd->add_option("--rays", f.rays, "R: boundary samples / rays (default 1000)");
    cmd->add_option("--ray-nodes", f.ray_nodes, "P: nodes per ray (default 1001)");
    cmd->add_option("--strips", f.strips, "M: piecewise strips, odd (default 1001)");
    cmd->add_option("--k-const", f.k_const, "K: strip constant > 1 (default 60)");
    cmd->add_option("--line-samples", f.line_samples,
                    "Samples per crossing line (default 1000)");
    cmd->add_option("--pair-parity", f.pair_parity, "Trace pair parity, 0 or 1 (default 0)")
        ->check(CLI::Range(0, 1));
    cmd->add_flag("--least-squares", f.least_squares,
                  "Fit by least squares over all R samples instead of collocation");
    cmd->add_flag("--serial", f.serial, "Run the serial reference kernels");
    cmd->add_option("--out", f.out_dir, "Output directory (default: out)");
}

eie::Overrides to_overrides(const CommonFlags& f) {
    eie::Overrides o;
    o.powers = f.powers;
    o.rays = f.rays;
    o.ray_nodes = f.ray_nodes;
    o.strips = f.strips;
    o.line_samples = f.line_samples;
    o.pair_parity = f.pair_parity;
    o.k_const = f.k_const;
    o.least_squares = f.least_squares;
    return o;
}

std::vector<std::string> selected_tags(const CommonFlags& f) {
    if (f.all) {
        std::vector<std::string> tags;
        for (const auto& s : eie::scenario_registry()) tags.push_back(s.tag);
        return tags;
    }
    if (f.scenarios.empty())
        throw eie::ValidationError("no scenario selected; pass --scenario TAG or --all");
    for (const auto& tag : f.scenarios) eie::find_scenario(tag); // validate before any work
    return f.scenarios;
}

void validate_flags(const CommonFlags& f) {
    eie::Params defaults;
    eie::validate(eie::apply_overrides(defaults, to_overrides(f)));
}

int cmd_list() {
    std::printf("%-14s %-46s %-10s %s\n", "tag", "description", "mode", "reference E");
    for (const auto& s : eie::scenario_registry()) {
        std::printf("%-14s %-46s %-10s %.4g\n", s.tag.c_str(), s.description.c_str(),
                    s.mode == eie::SigmaMode::exact_separable ? "exact" : "piecewise",
                    s.paper_error);
    }
    return 0;
}

int cmd_run(const CommonFlags& flags, bool dump_powers, bool dump_decomposition) {
    validate_flags(flags);
    const auto tags = selected_tags(flags);
    const eie::Execution exec =
        flags.serial ? eie::Execution::serial : eie::Execution::parallel;

    for (const auto& tag : tags) {
        const eie::ScenarioReport report = eie::run_scenario(tag, to_overrides(flags), exec);
        eie::emit_report(report, flags.format, flags.out_dir);
        if (dump_powers && report.powers)
            eie::dump_powers_csv(*report.powers, flags.out_dir + "/" + tag + "_powers.csv");
        if (dump_decomposition && report.piecewise)
            eie::dump_decomposition_json(*report.piecewise,
                                         flags.out_dir + "/" + tag + "_decomposition.json");
        if (report.paper_error > 0.0)
            std::printf("%-14s E = %.6e   E/ref = %.3f\n", tag.c_str(), report.fit.error,
                        report.error_ratio);
        else
            std::printf("%-14s E = %.6e\n", tag.c_str(), report.fit.error);
    }
    return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& parameter,
              const std::vector<int>& values) {
    validate_flags(flags);
    if (parameter != "N" && parameter != "P" && parameter != "M" && parameter != "R")
        throw eie::ValidationError("sweep parameter must be one of N, P, M, R");
    if (values.empty()) throw eie::ValidationError("sweep needs a non-empty value list");
    const auto tags = selected_tags(flags);
    const eie::Execution exec =
        flags.serial ? eie::Execution::serial : eie::Execution::parallel;

    std::error_code ec;
    std::filesystem::create_directories(flags.out_dir, ec);
    const std::string path = flags.out_dir + "/sweep_" + parameter + ".csv";
    std::ofstream csv(path);
    if (!csv) throw eie::IoError("cannot open " + path + " for writing");
    csv << "scenario,param,value,error\n";

    for (const auto& tag : tags) {
        for (int value : values) {
            eie::Overrides o = to_overrides(flags);
            if (parameter == "N") o.powers = value;
            if (parameter == "P") o.ray_nodes = value;
            if (parameter == "M") o.strips = value;
            if (parameter == "R") o.rays = value;
            const eie::ScenarioReport report = eie::run_scenario(tag, o, exec);
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%s,%d,%.17g\n", tag.c_str(), parameter.c_str(),
                          value, report.fit.error);
            csv << line;
            std::printf("%-14s %s = %-6d E = %.6e\n", tag.c_str(), parameter.c_str(), value,
                        report.fit.error);
        }
    }
    if (!csv) throw eie::IoError("failed writing " + path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formal-power forward solver for the conductivity equation on the unit disk"};
    app.require_subcommand(1);

    CLI::App* list = app.add_subcommand("list", "Show the experiment registry");

    CommonFlags run_flags;
    bool dump_powers = false;
    bool dump_decomposition = false;
    CLI::App* run = app.add_subcommand("run", "Run scenarios and write reports");
    add_common_flags(run, run_flags);
    run->add_option("--format", run_flags.format, "Report format: json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    run->add_flag("--dump-powers", dump_powers, "Also write boundary formal powers as CSV");
    run->add_flag("--dump-decomposition", dump_decomposition,
                  "Also write the piecewise decomposition as JSON");

    CommonFlags sweep_flags;
    std::string sweep_param;
    std::vector<int> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "Rerun scenarios over one parameter");
    add_common_flags(sweep, sweep_flags);
    sweep->add_option("--sweep", sweep_param, "Parameter to sweep: N, P, M or R")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated parameter values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
        if (list->parsed()) return cmd_list();
        if (run->parsed()) return cmd_run(run_flags, dump_powers, dump_decomposition);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_param, sweep_values);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const eie::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const eie::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const eie::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

// Command-line front end for the mirror parity-interferometry simulator.
//
// All quantities are SI (metres, seconds, kelvin, rad/s).  Configuration
// precedence: defaults < --config file < MPARITY_* environment overrides <
// --set key=value < dedicated flags (--seed, --threads, --out, --format).

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mparity/config.hpp"
#include "mparity/constants.hpp"
#include "mparity/errors.hpp"
#include "mparity/feasibility.hpp"
#include "mparity/pipeline.hpp"
#include "mparity/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEmptyData = 3;
constexpr int kExitNumerical = 4;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path,
                    "Config file of 'key = value' lines (see --help-keys)");
    cmd->add_option("--set", args.sets,
                    "Override one dotted config key, e.g. --set photon.eta=0.5")
        ->type_name("KEY=VALUE");
    cmd->add_option("--seed", args.seed, "Override run.seed");
    cmd->add_option("--threads", args.threads, "Override run.threads");
    cmd->add_option("--out", args.out,
                    "Output path (defaults to output.path, empty = stdout)");
    cmd->add_option("--format", args.format, "Override output.format (csv | json-doc)")
        ->check(CLI::IsMember({"csv", "json-doc"}));
}

mparity::config::ExperimentConfig assemble_config(const CommonArgs& args) {
    mparity::config::ExperimentConfig cfg;
    if (!args.config_path.empty()) {
        cfg = mparity::config::parse_file(args.config_path);
    }
    mparity::config::apply_env_overrides(cfg);
    for (const std::string& pair : args.sets) {
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) {
            throw mparity::InvalidArgumentError("--set expects KEY=VALUE, got '" + pair +
                                                "'");
        }
        mparity::config::set_key(cfg, pair.substr(0, eq), pair.substr(eq + 1));
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.threads) cfg.threads = *args.threads;
    if (args.out) cfg.out_path = *args.out;
    if (args.format) cfg.format = *args.format;
    return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string token =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!token.empty()) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                throw mparity::InvalidArgumentError("--grid: bad number '" + token + "'");
            }
            grid.push_back(v);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (grid.empty()) {
        throw mparity::InvalidArgumentError("--grid: the value list is empty");
    }
    return grid;
}

std::vector<std::int64_t> log_nucleon_grid(double n_min, double n_max, int points) {
    if (!(n_min >= 1.0) || !(n_max > n_min) || points < 2) {
        throw mparity::InvalidArgumentError(
            "feasibility: need n-min >= 1, n-max > n-min and points >= 2");
    }
    std::vector<std::int64_t> grid;
    grid.reserve(static_cast<std::size_t>(points));
    const double log_min = std::log(n_min);
    const double log_max = std::log(n_max);
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        const auto n = static_cast<std::int64_t>(
            std::llround(std::exp(log_min + f * (log_max - log_min))));
        if (grid.empty() || n > grid.back()) {
            grid.push_back(n < 1 ? 1 : n);
        }
    }
    return grid;
}

int run(int argc, char** argv) {
    CLI::App app{
        "mparity — photon parity statistics for a thermally occupied movable "
        "mirror.\nUnits are SI throughout; every config key can also be set via "
        "MPARITY_<KEY> (dots -> underscores, upper case)."};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Density-matrix pipeline: one summary row of parity and "
                    "acceptance statistics");
    add_common_options(sim, sim_args);

    CommonArgs sweep_args;
    std::string axis_name;
    std::string grid_text;
    CLI::App* swp = app.add_subcommand(
        "sweep", "Repeat simulate across a grid on one axis (temperature, eta, "
                 "loc_strength, grw_rate)");
    add_common_options(swp, sweep_args);
    swp->add_option("--axis", axis_name, "Sweep axis")->required();
    swp->add_option("--grid", grid_text, "Comma-separated axis values")->required();

    CommonArgs clicks_args;
    CLI::App* clk = app.add_subcommand(
        "clicks", "Monte Carlo click stream (one record per detected photon)");
    add_common_options(clk, clicks_args);

    CommonArgs feas_args;
    double lambda_m = 0.0;
    double eta = 0.0;
    double geometry = 2.0;
    double n_min = 1e6;
    double n_max = 1e12;
    int points = 25;
    std::vector<double> targets;
    CLI::App* feas = app.add_subcommand(
        "feasibility", "Closed-form resolution-requirement curve versus mirror size");
    feas->add_option("--lambda", lambda_m, "Photon wavelength, metres")->required();
    feas->add_option("--eta", eta, "Lamb-Dicke parameter")->required();
    feas->add_option("--geometry", geometry,
                     "Geometry factor g in (0, 2]; 2 = back-reflection");
    feas->add_option("--n-min", n_min, "Smallest nucleon count (default 1e6)");
    feas->add_option("--n-max", n_max, "Largest nucleon count (default 1e12)");
    feas->add_option("--points", points, "Number of log-spaced sizes (default 25)");
    feas->add_option("--target-ratio", targets,
                     "Also solve for the mirror size at this relative resolution "
                     "(repeatable)");
    feas->add_option("--out", feas_args.out, "Output path (empty = stdout)");
    feas->add_option("--format", feas_args.format, "csv | json-doc")
        ->check(CLI::IsMember({"csv", "json-doc"}));

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        const auto cfg = assemble_config(sim_args);
        const mparity::pipeline::Summary summary = mparity::pipeline::simulate(cfg);
        const std::string bytes = cfg.format == "csv"
                                      ? mparity::report::summary_csv(summary)
                                      : mparity::report::summary_json(summary);
        mparity::report::write_output(cfg.out_path, bytes);
        return kExitOk;
    }

    if (swp->parsed()) {
        const auto cfg = assemble_config(sweep_args);
        const mparity::pipeline::SweepAxis axis = mparity::pipeline::parse_axis(axis_name);
        const std::vector<double> grid = parse_grid(grid_text);
        const auto rows = mparity::pipeline::sweep(cfg, axis, grid);
        const std::string bytes = cfg.format == "csv"
                                      ? mparity::report::sweep_csv(axis, rows)
                                      : mparity::report::sweep_json(axis, rows);
        mparity::report::write_output(cfg.out_path, bytes);
        return kExitOk;
    }

    if (clk->parsed()) {
        const auto cfg = assemble_config(clicks_args);
        const mparity::detection::ClickStream stream = mparity::pipeline::clicks(cfg);
        const std::string bytes = cfg.format == "csv"
                                      ? mparity::report::clicks_csv(stream)
                                      : mparity::report::clicks_json(stream);
        mparity::report::write_output(cfg.out_path, bytes);
        std::cerr << mparity::report::click_summary_text(stream.summary);
        return kExitOk;
    }

    // feasibility
    const std::vector<std::int64_t> ns = log_nucleon_grid(n_min, n_max, points);
    const auto curve = mparity::feasibility::resolution_curve(ns, lambda_m, eta, geometry);
    std::vector<mparity::report::SolvedFeasibilityRow> solved;
    for (const double target : targets) {
        mparity::report::SolvedFeasibilityRow row;
        row.n_nucleons =
            mparity::feasibility::nucleons_for_resolution(target, lambda_m, eta, geometry);
        row.lambda_m = lambda_m;
        row.eta = eta;
        row.omega_rad_s = mparity::feasibility::omega_from_eta(
            eta, lambda_m, row.n_nucleons * mparity::constants::nucleon_mass, geometry);
        row.resolution_ratio = target;
        solved.push_back(row);
    }
    const std::string format = feas_args.format.value_or("csv");
    const std::string bytes = format == "csv"
                                  ? mparity::report::feasibility_csv(curve, solved)
                                  : mparity::report::feasibility_json(curve, solved);
    mparity::report::write_output(feas_args.out.value_or(""), bytes);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mparity::InvalidArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mparity::EmptyDataSetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEmptyData;
    } catch (const mparity::TruncationError& e) {
        std::cerr << "error: " << e.what() << " (required dim " << e.required_dim()
                  << ")\n";
        return kExitNumerical;
    } catch (const mparity::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

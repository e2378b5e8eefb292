// Command-line front end: validate, bands, bracket, estimate, report, bandpath.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgband/io.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kUsageError = 2,
    kInconsistent = 3,
    kRuntimeError = 4,
};

struct Flags {
    std::string spec_path;
    int grid = 32;
    double flat_tol = 1e-8;
    bool refine = false;
    std::string out;
    int gauge_radius = 0;
    std::string path;
    int steps = 32;
};

std::string one_line(std::string text)
{
    for (char& c : text)
        if (c == '\n' || c == '\r') c = ' ';
    return text;
}

int fail(int code, const std::string& kind, const std::string& message)
{
    std::cerr << "pgband: error: " << kind << ": " << one_line(message) << "\n";
    return code;
}

void write_output(const Flags& flags, const std::string& text)
{
    if (flags.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + flags.out + "'");
    out << text;
}

double parse_angle(std::string token)
{
    double sign = 1.0;
    if (!token.empty() && token.front() == '-') {
        sign = -1.0;
        token.erase(0, 1);
    }
    const auto pi_at = token.find("pi");
    if (pi_at == std::string::npos) return sign * std::stod(token);
    std::string coef = token.substr(0, pi_at);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double value = (coef.empty() ? 1.0 : std::stod(coef)) * std::numbers::pi;
    const std::string rest = token.substr(pi_at + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') throw std::invalid_argument("bad angle '" + token + "'");
        value /= std::stod(rest.substr(1));
    }
    return sign * value;
}

/// "0,0;pi,pi" -> two waypoints.
std::vector<pgband::Quasimomentum> parse_waypoints(const std::string& text, int dimension)
{
    std::vector<pgband::Quasimomentum> points;
    std::stringstream legs(text);
    std::string point;
    while (std::getline(legs, point, ';')) {
        std::vector<double> comps;
        std::stringstream parts(point);
        std::string token;
        while (std::getline(parts, token, ',')) comps.push_back(parse_angle(token));
        if (static_cast<int>(comps.size()) != dimension)
            throw std::invalid_argument("waypoint '" + point + "' has " + std::to_string(comps.size()) +
                                        " components, dimension is " + std::to_string(dimension));
        points.emplace_back(Eigen::Map<Eigen::VectorXd>(comps.data(), dimension));
    }
    return points;
}

pgband::AnalysisOptions analysis_options(const Flags& flags)
{
    pgband::AnalysisOptions options;
    options.grid_N = flags.grid;
    options.flat_tol = flags.flat_tol;
    options.refine = flags.refine;
    options.gauge_radius = flags.gauge_radius;
    return options;
}

void warn_grid_size(int dimension, int grid)
{
    if (std::pow(static_cast<double>(grid), dimension) > 1e7)
        std::cerr << "pgband: warning: grid has " << grid << "^" << dimension << " points\n";
}

int run(const std::string& command, const Flags& flags)
{
    if (command == "validate") {
        const auto graph = pgband::load_spec_file(flags.spec_path, false);
        const auto report = pgband::validate(graph);
        write_output(flags, pgband::emit_validation(report, graph));
        return report.valid() ? kOk : fail(kInputError, "invalid", report.reason());
    }

    const auto graph = pgband::load_spec_file(flags.spec_path);
    if (command == "bandpath") {
        std::vector<pgband::Quasimomentum> waypoints;
        if (flags.path.empty()) {
            waypoints.push_back(Eigen::VectorXd::Zero(graph.dimension));
            waypoints.push_back(Eigen::VectorXd::Constant(graph.dimension, std::numbers::pi));
        } else {
            waypoints = parse_waypoints(flags.path, graph.dimension);
        }
        write_output(flags, pgband::emit_band_path_csv(pgband::band_path(graph, waypoints, flags.steps)));
        return kOk;
    }

    warn_grid_size(graph.dimension, flags.grid);
    if (command == "bands") {
        const pgband::TorusGrid grid(graph.dimension, flags.grid);
        const auto table = pgband::sample_bands(graph, grid, {0, flags.refine});
        write_output(flags, pgband::emit_bands(pgband::band_intervals(table, flags.flat_tol), flags.grid));
        return kOk;
    }

    const auto analysis = pgband::analyze(graph, analysis_options(flags));
    if (command == "bracket")
        write_output(flags, pgband::emit_bracket(analysis, graph));
    else if (command == "estimate")
        write_output(flags, pgband::emit_estimates(analysis));
    else
        write_output(flags, pgband::emit_report(analysis, graph));
    if (command != "estimate" && !analysis.bracket.report.inclusion_ok())
        return fail(kInconsistent, "inconsistent", "sampled band outside its bracketing interval");
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Band structure and spectral band bracketing for periodic graphs"};
    app.require_subcommand(1);
    Flags flags;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"validate", "Check a graph description and report connectivity"},
        {"bands", "Sample the band functions on a torus grid"},
        {"bracket", "Bracketing intervals and certified gaps"},
        {"estimate", "Upper bounds on the total band length"},
        {"report", "Full report: bands, brackets, certified gaps, estimates"},
        {"bandpath", "Band functions along a path in quasimomentum space (CSV)"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("spec", flags.spec_path, "Graph description (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "Write output to this file instead of stdout");
        if (name == "validate") continue;
        if (name == "bandpath") {
            sub->add_option("--path", flags.path, "Waypoints, e.g. \"0,0;pi,0;pi,pi\" (default 0 to (pi,...,pi))");
            sub->add_option("--steps", flags.steps, "Subdivisions per leg")->capture_default_str();
            continue;
        }
        sub->add_option("--grid", flags.grid, "Samples per torus dimension (even)")->capture_default_str();
        sub->add_option("--flat-tol", flags.flat_tol, "Relative width below which a band is a flat candidate")
            ->capture_default_str();
        sub->add_flag("--refine", flags.refine, "Rescan around band extrema at 8x resolution");
        if (name != "bands")
            sub->add_option("--gauge-radius", flags.gauge_radius, "Search class offsets in [-R, R]")
                ->capture_default_str()
                ->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kUsageError, "usage", e.what());
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, flags);
    } catch (const pgband::ParseError& e) {
        return fail(kInputError, "parse", e.what());
    } catch (const pgband::GraphError& e) {
        return fail(kInputError, "invalid", e.what());
    } catch (const pgband::GaugeBudgetError& e) {
        return fail(kUsageError, "budget", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kUsageError, "argument", e.what());
    } catch (const std::exception& e) {
        return fail(kRuntimeError, "runtime", e.what());
    }
}

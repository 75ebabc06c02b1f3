#include "langmuir/analysis.hpp"
#include "langmuir/config.hpp"
#include "langmuir/dynamics.hpp"
#include "langmuir/io.hpp"
#include "langmuir/shooting.hpp"
#include "langmuir/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace langmuir;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_validation = 2,
    exit_bad_bracket = 3,
    exit_no_convergence = 4,
    exit_integration = 5,
};

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

std::string render_trajectory(const Trajectory& traj, OutputFormat format, double energy, const RunConfig& cfg,
                              const VectorField& field = langmuir_field)
{
    switch (format) {
    case OutputFormat::Csv: {
        std::ostringstream out;
        write_trajectory_csv(out, traj, field);
        return out.str();
    }
    case OutputFormat::Json: return trajectory_to_json(traj).dump(2) + "\n";
    case OutputFormat::Svg: return render_svg(trajectory_figure(traj, energy, "langmuir_lab " + cfg.provenance()));
    }
    return {};
}

void print_reports(const std::vector<CheckReport>& reports)
{
    for (const CheckReport& r : reports) {
        std::printf("%-22s %s%s  worst=%s  tol=%s%s%s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.gated ? "" : " (diagnostic)", format_double(r.worst_violation).c_str(),
                    format_double(r.tolerance).c_str(), r.error.empty() ? "" : "  error: ", r.error.c_str());
    }
}

int cmd_simulate(RunConfig& cfg)
{
    const State s0 = initial_state({cfg.energy, cfg.height});
    cfg.settings.t_limit = cfg.t_end.value_or(100.0);
    const EventMask watch{EventKind::XVelocityZero, EventKind::MagicalLineCross, EventKind::BrakePoint};
    const Trajectory traj = cfg.rests > 0
                                ? integrate(s0, cfg.settings, watch, {EventKind::XVelocityZero}, cfg.rests)
                                : integrate(s0, cfg.settings, watch);
    emit(cfg.out, render_trajectory(traj, cfg.format, cfg.energy, cfg));
    if (!cfg.out.empty()) {
        std::printf("samples=%zu termination=%s t_final=%s energy_drift=%s\n", traj.samples.size(),
                    std::string(to_string(traj.termination)).c_str(), format_double(traj.back().t).c_str(),
                    format_double(traj.max_energy_drift).c_str());
    }
    return exit_ok;
}

int cmd_find_orbit(RunConfig& cfg, const RootOptions& root)
{
    const auto bracket = cfg.bracket.value_or(cfg.kind == OrbitKind::Langmuir ? default_langmuir_bracket(cfg.energy)
                                                                              : default_brake_bracket(cfg.energy));
    OrbitRecord rec;
    if (cfg.kind == OrbitKind::Langmuir) {
        rec = find_langmuir_orbit(cfg.energy, bracket, cfg.settings, root);
    } else {
        int k = cfg.k;
        if (k == 0) {
            k = classify_reflection_count(cfg.energy, bracket, cfg.settings);
            if (k == 0) {
                throw BadBracket("no alpha_k with 2 <= k <= 8 changes sign over the bracket");
            }
        }
        rec = find_brake_orbit(cfg.energy, bracket, k, cfg.settings, root);
    }
    emit(cfg.out, orbit_to_json(rec).dump(2) + "\n");
    if (!cfg.csv_out.empty() || !cfg.svg_out.empty()) {
        const Trajectory orbit = assemble_periodic_orbit(rec, cfg.settings);
        if (!cfg.csv_out.empty()) {
            write_file(cfg.csv_out, render_trajectory(orbit, OutputFormat::Csv, cfg.energy, cfg));
        }
        if (!cfg.svg_out.empty()) {
            write_file(cfg.svg_out, render_trajectory(orbit, OutputFormat::Svg, cfg.energy, cfg));
        }
    }
    if (!cfg.out.empty()) {
        std::printf("kind=%s k=%d h_star=%s period=%s alpha_residual=%s touch_speed=%s\n",
                    std::string(to_string(rec.kind)).c_str(), rec.reflection_count, format_double(rec.h_star).c_str(),
                    format_double(4.0 * rec.quarter_period).c_str(), format_double(rec.alpha_residual).c_str(),
                    format_double(rec.touch_state.speed()).c_str());
    }
    return exit_ok;
}

int cmd_scan(RunConfig& cfg)
{
    const std::vector<double> grid =
        cfg.grid ? uniform_grid(cfg.grid->lo, cfg.grid->hi, cfg.grid->n) : default_scan_grid(cfg.energy);
    const std::vector<ShootResult> scan = scan_alpha(cfg.energy, grid, cfg.settings);
    std::ostringstream out;
    write_scan_csv(out, scan);
    emit(cfg.out, out.str());
    if (!cfg.out.empty()) {
        for (const auto& [lo, hi] : sign_change_brackets(scan)) {
            std::printf("sign change in [%s, %s]\n", format_double(lo).c_str(), format_double(hi).c_str());
        }
    }
    const bool any_ok =
        std::any_of(scan.begin(), scan.end(), [](const ShootResult& r) { return r.status == ShootStatus::Ok; });
    if (!any_ok) {
        std::cerr << "scan: no grid point produced an x-rest\n";
        return exit_integration;
    }
    return exit_ok;
}

int finish_reports(const std::vector<CheckReport>& reports, const std::string& report_path)
{
    print_reports(reports);
    if (!report_path.empty()) {
        write_file(report_path, verdict_to_json(reports).dump(2) + "\n");
    }
    return all_gated_passed(reports) ? exit_ok : exit_verify_failed;
}

int cmd_verify(RunConfig& cfg)
{
    return finish_reports(run_verification(cfg.settings), cfg.report);
}

int cmd_zero_energy(RunConfig& cfg)
{
    const double t_end = cfg.t_end.value_or(50.0);
    std::vector<CheckReport> reports{check_inverted_concavity(t_end, cfg.settings),
                                     check_zero_energy_height(t_end, cfg.settings),
                                     check_zero_energy_monotone(t_end, cfg.settings)};
    if (!cfg.out.empty()) {
        IntegratorSettings s = cfg.settings;
        s.t_limit = t_end;
        const Trajectory traj = integrate(initial_state({0.0, 1.0}), s);
        write_file(cfg.out, render_trajectory(traj, cfg.format, 0.0, cfg));
    }
    return finish_reports(reports, cfg.report);
}

struct Flags {
    double tol = 0.0;
    std::vector<double> bracket;
    std::vector<double> grid;
    std::string kind = "langmuir";
    std::string format = "csv";
    double t_end = 0.0;
};

int dispatch(const std::vector<std::string>& raw)
{
    // --config is resolved before CLI11 sees the arguments: its entries are
    // appended only for flags that were not given explicitly.
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) {
            config_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        } else {
            args.push_back(raw[i]);
        }
    }
    if (!config_path.empty()) {
        args = merge_config(std::move(args), read_config_file(config_path));
    }

    CLI::App app{"Numerical laboratory for the Langmuir periodic orbit of planar helium"};
    app.require_subcommand(1);
    app.add_option("--config", config_path, "Flat key=value file; keys are the long flag names");

    RunConfig cfg;
    Flags flags;
    RootOptions root;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", flags.tol, "Relative integration tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--abs-tol", cfg.settings.abs_tol, "Absolute integration tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--h-max", cfg.settings.h_max, "Largest integrator step")->check(CLI::PositiveNumber);
        sub->add_option("--h-min", cfg.settings.h_min, "Smallest integrator step before giving up")
            ->check(CLI::PositiveNumber);
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate the Langmuir problem and export the trajectory");
    simulate->add_option("--energy", cfg.energy, "Energy E")->required();
    simulate->add_option("--height", cfg.height, "Initial height h")->required();
    simulate->add_option("--out", cfg.out, "Output file (stdout if omitted)");
    simulate->add_option("--format", flags.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    simulate->add_option("--rests", cfg.rests, "Stop at this x-rest (0: run to t-end)")->check(CLI::NonNegativeNumber);
    simulate->add_option("--t-end", flags.t_end, "Time limit (default 100)")->check(CLI::PositiveNumber);
    add_common(simulate);

    auto* find = app.add_subcommand("find-orbit", "Solve for a periodic orbit by shooting on the initial height");
    find->add_option("--energy", cfg.energy, "Energy E (negative)")->required();
    find->add_option("--bracket", flags.bracket, "Height bracket LO,HI")->delimiter(',')->expected(2);
    find->add_option("--kind", flags.kind, "langmuir or brake")->check(CLI::IsMember({"langmuir", "brake"}));
    find->add_option("--k", cfg.k, "Reflection count for brake orbits (0: classify)")->check(CLI::NonNegativeNumber);
    find->add_option("--max-iter", root.max_iterations, "Root-finder iteration budget")->check(CLI::PositiveNumber);
    find->add_option("--alpha-tol", root.alpha_tol, "Required |alpha| at the root")->check(CLI::PositiveNumber);
    find->add_option("--out", cfg.out, "Orbit record JSON (stdout if omitted)");
    find->add_option("--csv", cfg.csv_out, "Closed orbit over one period as CSV");
    find->add_option("--svg", cfg.svg_out, "Closed orbit over one period as SVG");
    add_common(find);

    auto* scan = app.add_subcommand("scan", "Tabulate the shooting functional over a height grid");
    scan->add_option("--energy", cfg.energy, "Energy E")->required();
    scan->add_option("--grid", flags.grid, "LO,HI,N")->delimiter(',')->expected(3);
    scan->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");
    add_common(scan);

    auto* verify = app.add_subcommand("verify", "Run the numerical check suite");
    verify->add_option("--report", cfg.report, "Verdict JSON");
    add_common(verify);

    auto* zero = app.add_subcommand("zero-energy", "Radial monotonicity checks of the E = 0 orbit");
    zero->add_option("--t-end", flags.t_end, "Horizon in original time (default 50)")->check(CLI::PositiveNumber);
    zero->add_option("--report", cfg.report, "Verdict JSON");
    zero->add_option("--out", cfg.out, "Trajectory output");
    zero->add_option("--format", flags.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    add_common(zero);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    if (flags.tol > 0.0) {
        cfg.settings.rel_tol = flags.tol;
        cfg.settings.event_tol = std::min(cfg.settings.event_tol, flags.tol);
    }
    if (!flags.bracket.empty()) {
        cfg.bracket = std::pair{flags.bracket[0], flags.bracket[1]};
    }
    if (!flags.grid.empty()) {
        const double n = flags.grid[2];
        if (n != static_cast<int>(n)) {
            throw ValidationError("grid point count must be an integer");
        }
        cfg.grid = GridSpec{flags.grid[0], flags.grid[1], static_cast<int>(n)};
    }
    if (flags.t_end > 0.0) {
        cfg.t_end = flags.t_end;
    }
    cfg.kind = orbit_kind_from_string(flags.kind);
    cfg.format = output_format_from_string(flags.format);

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    cfg.validate();

    if (chosen == simulate) return cmd_simulate(cfg);
    if (chosen == find) {
        if (!(cfg.energy < 0.0)) {
            throw ValidationError("find-orbit needs a negative energy");
        }
        return cmd_find_orbit(cfg, root);
    }
    if (chosen == scan) return cmd_scan(cfg);
    if (chosen == verify) return cmd_verify(cfg);
    return cmd_zero_energy(cfg);
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dispatch(args);
    } catch (const BadBracket& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_bracket;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_no_convergence;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_integration;
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "langmuir/config.hpp"
#include "langmuir/io.hpp"
#include "langmuir/svg.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

using namespace langmuir;

namespace {

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

Trajectory sample_trajectory()
{
    IntegratorSettings st;
    st.t_limit = 3.0;
    return integrate(initial_state({-1.0, 1.398}), st, {EventKind::XVelocityZero});
}

} // namespace

TEST_CASE("17 significant digits round-trip")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("trajectory CSV round-trips exactly")
{
    const Trajectory tr = sample_trajectory();
    std::stringstream buf;
    write_trajectory_csv(buf, tr);
    const std::string text = buf.str();
    CHECK(text.substr(0, text.find('\n')) == "t,x,y,vx,vy,energy");
    CHECK(count(text, "\n") == tr.samples.size() + 1);

    const TrajectoryTable table = read_trajectory_csv(buf);
    REQUIRE(table.samples.size() == tr.samples.size());
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        CHECK(table.samples[i] == tr.samples[i]);
        CHECK(std::abs(energy(table.samples[i]) - table.energies[i]) <= 1e-12);
    }
}

TEST_CASE("trajectory CSV reader rejects malformed input")
{
    std::istringstream wrong_header("t,x,y\n1,2,3\n");
    CHECK_THROWS_AS(read_trajectory_csv(wrong_header), FormatError);
    std::istringstream short_row("t,x,y,vx,vy,energy\n1,2,3,4,5\n");
    CHECK_THROWS_AS(read_trajectory_csv(short_row), FormatError);
    std::istringstream long_row("t,x,y,vx,vy,energy\n1,2,3,4,5,6,7\n");
    CHECK_THROWS_AS(read_trajectory_csv(long_row), FormatError);
    std::istringstream bad_number("t,x,y,vx,vy,energy\n1,2,x3,4,5,6\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad_number), FormatError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_trajectory_csv(empty), FormatError);
}

TEST_CASE("trajectory JSON carries samples, events and the schema tag")
{
    const Trajectory tr = sample_trajectory();
    const nlohmann::json j = trajectory_to_json(tr);
    CHECK(j.at("schema") == std::string(trajectory_schema));
    CHECK(j.at("samples").size() == tr.samples.size());
    CHECK(j.at("events").size() == tr.events.size());
    CHECK(j.at("termination") == "TimeLimit");
    CHECK(j.at("samples")[5][2].get<double>() == tr.samples[5].y);
}

TEST_CASE("scan CSV")
{
    IntegratorSettings st;
    const auto scan = scan_alpha(-1.0, std::vector<double>{1.0, 4.0}, st);
    std::ostringstream out;
    write_scan_csv(out, scan);
    const std::string text = out.str();
    CHECK(text.rfind("h,t_h,alpha,n_magical_crossings,energy_drift,status\n", 0) == 0);
    CHECK(count(text, "\n") == 3);
    CHECK(text.find(",Ok\n") != std::string::npos);
    CHECK(text.find("4,,,,,Failed\n") != std::string::npos);
}

TEST_CASE("orbit records round-trip through JSON")
{
    const IntegratorSettings st;
    for (const OrbitRecord& rec : {find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), st),
                                   find_brake_orbit(-1.0, default_brake_bracket(-1.0), 3, st)}) {
        const std::string text = orbit_to_json(rec).dump(2);
        const OrbitRecord back = orbit_from_json(nlohmann::json::parse(text));
        CHECK(back == rec);
    }
    nlohmann::json foreign = orbit_to_json(OrbitRecord{});
    foreign["schema"] = "something/else";
    CHECK_THROWS_AS(orbit_from_json(foreign), FormatError);
    nlohmann::json missing = orbit_to_json(OrbitRecord{});
    missing.erase("h_star");
    CHECK_THROWS_AS(orbit_from_json(missing), FormatError);
    nlohmann::json bad_kind = orbit_to_json(OrbitRecord{});
    bad_kind["kind"] = "spiral";
    CHECK_THROWS_AS(orbit_from_json(bad_kind), FormatError);
}

TEST_CASE("verdict JSON is keyed by check name")
{
    CheckReport a;
    a.name = "zeta";
    a.passed = true;
    a.worst_violation = -1.0;
    a.details = {{"n", 3.0}};
    CheckReport b;
    b.name = "alpha";
    b.passed = false;
    b.gated = false;
    b.worst_violation = 2.0;
    b.tolerance = 1.0;
    const std::vector<CheckReport> reports{a, b};
    const nlohmann::json v = verdict_to_json(reports);
    CHECK(v.at("schema") == std::string(verdict_schema));
    CHECK(v.at("passed") == true);
    CHECK(v.at("checks").begin().key() == "alpha");
    CHECK(v.at("checks").at("zeta").at("details").at("n") == 3.0);
    CHECK(v.at("checks").at("alpha").at("tolerance") == 1.0);
    CHECK(v.dump() == verdict_to_json(reports).dump());
}

TEST_CASE("fit_view adds a five percent margin")
{
    const std::vector<Point> pts{{-1.0, 0.0}, {3.0, 2.0}};
    const ViewBox v = fit_view(pts);
    CHECK(v.x_min == doctest::Approx(-1.2));
    CHECK(v.x_max == doctest::Approx(3.2));
    CHECK(v.y_min == doctest::Approx(-0.1));
    CHECK(v.y_max == doctest::Approx(2.1));
    CHECK_THROWS_AS(fit_view(std::vector<Point>{}), std::invalid_argument);
}

TEST_CASE("SVG figures: one path per curve and the run configuration as a comment")
{
    const Trajectory tr = sample_trajectory();
    const std::string svg = render_svg(trajectory_figure(tr, -1.0, "command=simulate energy=-1 --height 1.398"));
    CHECK(count(svg, "<path ") == 3);
    CHECK(count(svg, "id=\"trajectory\"") == 1);
    CHECK(count(svg, "id=\"hill_boundary\"") == 1);
    CHECK(count(svg, "id=\"magical_line\"") == 1);
    CHECK(count(svg, "<circle ") == 1);
    CHECK(svg.find("<!-- command=simulate energy=-1 - -height 1.398 -->") != std::string::npos);
    // No "--" may appear inside the comment body.
    const auto open = svg.find("<!--") + 4;
    const auto close = svg.find("-->");
    CHECK(svg.substr(open, close - open).find("--") == std::string::npos);

    // The window is fitted to the Hill region: apex at y = 3.5, plus margin.
    const Figure fig = trajectory_figure(tr, -1.0, "");
    CHECK(fig.view.y_max == doctest::Approx(3.5 * 1.05).epsilon(1e-6));
    CHECK(fig.view.y_min == doctest::Approx(-0.05 * 3.5).epsilon(1e-6));
}

TEST_CASE("SVG figure for the ionization level")
{
    IntegratorSettings st;
    st.t_limit = 10.0;
    const Trajectory tr = integrate(initial_state({0.0, 1.0}), st);
    const Figure fig = trajectory_figure(tr, 0.0, "zero");
    REQUIRE(fig.curves.size() == 3);
    CHECK(fig.curves[0].id == "hill_boundary");
    CHECK(fig.curves[0].points.size() == 3);
    CHECK(count(render_svg(fig), "<path ") == 3);
}

TEST_CASE("config files: flat key=value with comments")
{
    std::istringstream in("# defaults for a run\nenergy = -2\n\nheight=0.7\nbracket=0.3,0.8\n");
    const ConfigEntries e = parse_config(in);
    REQUIRE(e.size() == 3);
    CHECK(e[0] == std::pair<std::string, std::string>{"energy", "-2"});
    CHECK(e[2].second == "0.3,0.8");

    std::istringstream broken("energy -2\n");
    CHECK_THROWS_AS(parse_config(broken), ValidationError);
    std::istringstream twice("energy=-2\nenergy=-1\n");
    CHECK_THROWS_AS(parse_config(twice), ValidationError);
    CHECK_THROWS_AS(read_config_file("/nonexistent/langmuir.cfg"), ValidationError);
}

TEST_CASE("command-line flags take precedence over the config file")
{
    const ConfigEntries file{{"energy", "-2"}, {"height", "0.7"}};
    const auto merged = merge_config({"simulate", "--energy", "-1.5"}, file);
    const std::vector<std::string> expected{"simulate", "--energy", "-1.5", "--height", "0.7"};
    CHECK(merged == expected);
    const auto eq_form = merge_config({"simulate", "--height=2"}, file);
    const std::vector<std::string> expected_eq{"simulate", "--height=2", "--energy", "-2"};
    CHECK(eq_form == expected_eq);
}

TEST_CASE("run configuration validation and provenance")
{
    RunConfig cfg;
    cfg.command = "simulate";
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.provenance().find("command=simulate energy=-1 height=1") == 0);

    RunConfig bad = cfg;
    bad.height = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.bracket = std::pair{0.8, 0.3};
    CHECK_THROWS_AS(bad.validate(), BadBracket);
    bad = cfg;
    bad.grid = GridSpec{1.0, 0.5, 3};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.settings.rel_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.t_end = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    CHECK(output_format_from_string("svg") == OutputFormat::Svg);
    CHECK(to_string(OutputFormat::Json) == "json");
    CHECK_THROWS_AS(output_format_from_string("png"), ValidationError);
}

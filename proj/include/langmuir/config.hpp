#pragma once

#include "langmuir/integrator.hpp"
#include "langmuir/shooting.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace langmuir {

/// Bad user input; maps to exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Json, Svg };

std::string_view to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view name);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

/// Everything one command needs, after merging flags, config file and defaults.
struct RunConfig {
    std::string command;
    double energy = -1.0;
    double height = 1.0;
    std::optional<std::pair<double, double>> bracket;
    OrbitKind kind = OrbitKind::Langmuir;
    /// Reflection count for brake orbits; 0 lets the classifier choose.
    int k = 0;
    std::optional<GridSpec> grid;
    /// Stop a simulation at this x-rest; 0 runs to the time limit.
    int rests = 0;
    std::optional<double> t_end;
    IntegratorSettings settings;
    std::string out;
    OutputFormat format = OutputFormat::Csv;
    std::string csv_out;
    std::string svg_out;
    std::string report;

    /// Throws ValidationError (or BadBracket for a malformed bracket).
    void validate() const;

    /// Space-separated key=value record of the effective configuration.
    std::string provenance() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat key=value lines; blank lines and lines starting with '#' are skipped.
ConfigEntries parse_config(std::istream& in);
ConfigEntries read_config_file(const std::string& path);

/// Appends "--key value" for every entry whose flag does not already appear in
/// `args`, so command-line flags take precedence over the file.
std::vector<std::string> merge_config(std::vector<std::string> args, const ConfigEntries& entries);

} // namespace langmuir

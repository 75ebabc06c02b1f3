#include "langmuir/config.hpp"

#include "langmuir/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace langmuir {

std::string_view to_string(OutputFormat format)
{
    switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Svg: return "svg";
    }
    return "csv";
}

OutputFormat output_format_from_string(std::string_view name)
{
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "svg") return OutputFormat::Svg;
    throw ValidationError("unknown output format: " + std::string(name));
}

void RunConfig::validate() const
{
    if (!std::isfinite(energy)) {
        throw ValidationError("energy must be finite");
    }
    if (!(height > 0.0) || !std::isfinite(height)) {
        throw ValidationError("height must be positive");
    }
    if (bracket && !(bracket->first > 0.0 && bracket->first < bracket->second)) {
        throw BadBracket("bracket must satisfy 0 < LO < HI");
    }
    if (grid && !(grid->lo > 0.0 && grid->lo <= grid->hi && grid->n >= 1)) {
        throw ValidationError("grid must satisfy 0 < LO <= HI and N >= 1");
    }
    if (k < 0 || rests < 0) {
        throw ValidationError("reflection and rest counts must be non-negative");
    }
    if (t_end && !(*t_end > 0.0)) {
        throw ValidationError("t-end must be positive");
    }
    try {
        settings.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

std::string RunConfig::provenance() const
{
    std::ostringstream out;
    out << "command=" << command << " energy=" << format_double(energy) << " height=" << format_double(height);
    if (bracket) {
        out << " bracket=" << format_double(bracket->first) << ',' << format_double(bracket->second);
    }
    out << " kind=" << to_string(kind) << " k=" << k;
    if (grid) {
        out << " grid=" << format_double(grid->lo) << ',' << format_double(grid->hi) << ',' << grid->n;
    }
    out << " rests=" << rests;
    if (t_end) {
        out << " t_end=" << format_double(*t_end);
    }
    out << " rel_tol=" << format_double(settings.rel_tol) << " abs_tol=" << format_double(settings.abs_tol)
        << " h_max=" << format_double(settings.h_max) << " t_limit=" << format_double(settings.t_limit)
        << " format=" << to_string(format);
    return out.str();
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

ConfigEntries parse_config(std::istream& in)
{
    ConfigEntries entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        const bool duplicate =
            std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
        if (duplicate) {
            throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key " + key);
        }
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

ConfigEntries read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file " + path);
    }
    return parse_config(in);
}

std::vector<std::string> merge_config(std::vector<std::string> args, const ConfigEntries& entries)
{
    const auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> extra;
    for (const auto& [key, value] : entries) {
        const std::string flag = "--" + key;
        if (!given(flag)) {
            extra.push_back(flag);
            extra.push_back(value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace langmuir

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matterwave/analysis.hpp"
#include "matterwave/config.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/units.hpp"

namespace matterwave::cli {

/// Physical dimension of a parameter, which fixes the accepted suffixes.
enum class Quantity {
    Time,      ///< "12.5us" (atom preset) or dimensionless
    Momentum,  ///< "0.1hbark" or bare number
    Angle,     ///< "0.5pi" or radians
    Plain,
};

/// Parsed value list of one parameter. A single value or a sweep
/// "a..b:count", "a..b:count:log" or "a,b,c".
struct Axis {
    std::string key;
    std::string text;
    std::vector<double> values;  ///< dimensionless
    std::vector<double> given;   ///< as written, before unit conversion
    bool microseconds = false;   ///< time given in microseconds
    bool sweep = false;

    double scalar() const { return values.front(); }
};

Axis parse_axis(const std::string& key, const std::string& text, Quantity quantity, const UnitSystem& units);

/// Raw key -> text store filled from a JSON config file, then overridden by
/// command-line flags. Keys are snake_case.
class ParameterStore {
public:
    void set(const std::string& key, std::string value, std::string origin);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const noexcept { return values_; }
    const std::string& origin(const std::string& key) const { return origins_.at(key); }

    /// Loads a JSON object of scalar values. Unknown keys are config errors.
    void load_json(const std::filesystem::path& path);

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> origins_;
};

/// Every key accepted in config files and (as --kebab-case) on the
/// command line.
const std::vector<std::string>& known_keys();

/// Typed view of a ParameterStore after validation.
struct Resolved {
    UnitSystem units;
    DiffractionConfig config;  ///< scalar fields; swept fields hold the first value
    SolverSettings solver;
    AnalysisOptions options;
    Axis delta_tau;
    Axis delta_p;
    Axis p0;
    Axis pulse_area;
    std::optional<std::filesystem::path> cache_dir;
    /// Ordered (key, text) echo of every resolved parameter.
    std::vector<std::pair<std::string, std::string>> echo;

    const Axis& axis(const std::string& key) const;
};

/// Parses and validates all parameters. Throws ConfigError naming the key.
Resolved resolve(const ParameterStore& store);

// Helpers for command-specific keys.
int parse_int(const std::string& key, const std::string& text);
double parse_double(const std::string& key, const std::string& text);
std::string require_choice(const std::string& key, const std::string& text, const std::vector<std::string>& choices);

}  // namespace matterwave::cli

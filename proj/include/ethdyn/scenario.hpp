#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ethdyn/errors.hpp"

namespace ethdyn::scenario {

using Json = nlohmann::ordered_json;

enum class Kind { Marker, Game, Polytope, Simulate2d, Simulate3d };

std::string_view kind_name(Kind k);

struct Scenario {
    std::string name;
    Kind kind = Kind::Marker;
    Json params;
};

/// Schema violation: `path` is the dotted field path (params.integration.dt),
/// `constraint` the rule it broke (> 0, required, ...).
class ValidationError : public DomainError {
public:
    ValidationError(std::string path, std::string constraint);

    const std::string& path() const noexcept { return path_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string path_;
    std::string constraint_;
};

/// Malformed JSON text, 1-based position.
class ParseError : public DomainError {
public:
    ParseError(const std::string& detail, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Parse then validate. Unknown keys are rejected. Defaults are filled in,
/// so the returned params are complete.
Scenario validate_scenario(std::string_view text);
Scenario validate_scenario(const Json& document);

/// Integral values within 2^53 become JSON integers; -0 becomes 0.
Json number(double v);

/// Parse JSON text, raising ParseError with line and column.
Json parse_json(std::string_view text);

struct Preset {
    std::string name;
    /// Quote of the figure caption the parameters were transcribed from.
    std::string caption;
    Scenario scenario;
};

class PresetRegistry {
public:
    static const PresetRegistry& instance();

    const std::vector<Preset>& all() const { return presets_; }
    /// nullptr when unknown.
    const Preset* find(std::string_view name) const;

private:
    PresetRegistry();
    std::vector<Preset> presets_;
};

struct RunOptions {
    std::size_t jobs = 1;
};

struct RunResult {
    /// file name -> contents; nothing is written by run_scenario itself
    std::map<std::string, std::string> files;
    Json summary;
};

RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

} // namespace ethdyn::scenario

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skinlat/model.hpp"

namespace skinlat::cli {

inline constexpr const char* kSchemaTag = "skinlat/1";

// Config problem tied to a field path such as "model.u".
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class StateClass { Any, Bound, Scattering };

struct Selection {
    enum class Rule { LargestReal, ModulusNearest, DistanceTo, Index };
    Rule rule = Rule::LargestReal;
    cplx value{0.0};
    int index = 0;
    StateClass state_class = StateClass::Any;
    std::string label;
};

struct ExperimentConfig {
    std::string experiment;
    std::string name;
    bool extended = false;
    ModelParams model;
    ExtendedParams extended_model;
    std::vector<Selection> selections;
    std::set<std::string> formats;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json source;  // the config as given
};

const std::vector<std::string>& experiment_names();

// Accepts a real number or a [re, im] pair.
cplx parse_complex(const nlohmann::json& j, const std::string& field);

// Throws ValidationError naming the first offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Typed accessors for experiment parameters, with the field path in errors.
double param_number(const ExperimentConfig& c, const std::string& key, std::optional<double> fallback = std::nullopt);
int param_int(const ExperimentConfig& c, const std::string& key, std::optional<int> fallback = std::nullopt);
std::string param_string(const ExperimentConfig& c, const std::string& key, const std::vector<std::string>& allowed,
                         const std::string& fallback);
std::vector<double> param_numbers(const ExperimentConfig& c, const std::string& key);
std::vector<cplx> param_complexes(const ExperimentConfig& c, const std::string& key);

}  // namespace skinlat::cli

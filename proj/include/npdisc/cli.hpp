#pragma once

#include "npdisc/csv.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npdisc::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kRuntimeFailure = 1,
    kUnknownRecipe = 2,
    kMalformedParameter = 3,
    kUnwritablePath = 4,
};

class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

struct ParamDoc {
    std::string key;
    std::string fallback;
    std::string description;
};

struct RecipeInfo {
    std::string name;
    std::string summary;
    std::string sort_key;
    std::vector<ParamDoc> params;
};

const std::vector<RecipeInfo>& recipes();
std::string catalog_text();
/// Throws CliError(kUnknownRecipe).
std::string recipe_help(const std::string& name);

struct ExperimentConfig {
    std::string recipe;
    std::map<std::string, std::string> params;
    std::optional<std::string> output_path;
    std::uint64_t seed = 0;
    bool reproducible = false;
};

/// `<recipe> key=value ... [--out PATH] [--seed U64] [--reproducible]`;
/// `run recipe=<name> ...` is accepted as well. Throws CliError.
ExperimentConfig parse_args(const std::vector<std::string>& args);

/// Runs a recipe; the table carries the metadata comment lines.
csv::Table run_recipe(const ExperimentConfig& config);

/// Full command-line behaviour; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace npdisc::cli

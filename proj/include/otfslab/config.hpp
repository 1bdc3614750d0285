#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "otfslab/experiment.hpp"

namespace otfslab {

// Configuration problem with a location-carrying message ("file:line: ..."
// for syntax errors, "file: field.path: ..." for semantic ones).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigReport {
    std::vector<std::string> warnings;
};

// Parses and validates an experiment config document. Hard violations throw
// ConfigError; soft ones (values outside the usual parameter table) land in
// the report as warnings.
ExperimentConfig load_config_text(const std::string& text, const std::string& origin,
                                  ConfigReport* report = nullptr);
ExperimentConfig load_config_file(const std::string& path, ConfigReport* report = nullptr);

}  // namespace otfslab

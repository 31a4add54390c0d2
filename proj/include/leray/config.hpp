#pragma once

#include "leray/experiments.hpp"

#include <map>
#include <string>

namespace leray {

/// Flat "key = value" file; '#' starts a comment, blank lines ignored.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);
ConfigMap parse_config_text(const std::string& text);

/// Builds a SolverConfig from the keys documented in configs/simulate.cfg.
SolverConfig solver_config_from(const ConfigMap& cfg);
/// Adds the sweep keys documented in configs/converge.cfg.
ExperimentConfig experiment_config_from(const ConfigMap& cfg);

/// Displacement list for the structure subcommand: y_count points along the
/// x axis, |y| log-spaced in [y_min, y_max].
std::vector<Eigen::Vector3d> displacement_list_from(const ConfigMap& cfg);
SubBox sub_box_from(const ConfigMap& cfg, const Grid& grid);

}  // namespace leray

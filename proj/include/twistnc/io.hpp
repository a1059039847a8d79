#pragma once

#include "twistnc/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace twistnc {

/// Column order of the time-series file:
/// t, X1_p1..X3_pN, P1_p1..P3_pN, x1_p1..x3_pN, p1_p1..p3_pN
std::vector<std::string> trajectory_columns(std::size_t particles);

/// One CSV row per retained sample (stride `every`, final sample always
/// kept). Numbers are shortest round-trip decimals, so reruns are
/// byte-identical.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int every);

std::string trajectory_manifest(const ScenarioConfig& config, const std::string& command,
                                const Trajectory& trajectory, int every,
                                std::size_t samples_written);

/// t plus one deviation column per mass pair, labelled dev_<mi>_<mj>.
void write_deviations_csv(std::ostream& out, const std::vector<double>& times,
                          const std::vector<double>& masses,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          const std::vector<std::vector<double>>& deviations);

/// Minimal gnuplot script plotting the deformed coordinates of a trajectory
/// file; the CLI emits data plus this script, it does not render images.
std::string gnuplot_script(const std::string& csv_path, std::size_t particles);

}  // namespace twistnc

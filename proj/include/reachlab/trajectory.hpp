#pragma once

#include <string>

#include "reachlab/eval.hpp"

namespace reachlab {

// Writes one CSV per episode (episode_000.csv, ...) with the documented
// header; re-exporting the same logs is byte-identical. With svg = true also
// writes a fingertip-path snapshot per episode.
void export_trajectories(std::span<const EpisodeLog> episodes, const std::string& dir,
                         bool svg = false);

// Reads every episode_*.csv under dir back into logs (trial records included).
std::vector<EpisodeLog> read_trajectories(const std::string& dir);

// Metrics recomputed purely from the exported files.
Metrics metrics_from_exported(const std::string& dir);

}  // namespace reachlab

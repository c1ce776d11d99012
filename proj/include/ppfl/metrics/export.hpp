#pragma once
#include <string>

#include "ppfl/metrics/trajectory.hpp"

namespace ppfl {

// Writes metrics.csv, c_snapshots/round_<t>.csv, and summary.json under dir
// (created if missing). Floats go out with 17 significant digits so the files
// round-trip exactly; identical trajectories export identical bytes.
void export_run(const RunTrajectory& traj, const std::string& dir);

// 17-significant-digit formatting used by every exporter.
std::string format_double(double v);

}  // namespace ppfl

#pragma once

#include <string>

#include "nlch/physics.hpp"
#include "nlch/solver.hpp"

namespace nlch {

// Wiener path replay files (see docs/formats.md). The CSV form is
// "step,mode,increment" with the seed lineage and step grid in header
// comments; the binary form is the same data behind a fixed magic.
void export_path_csv(const WienerPath& path, const std::string& file);
WienerPath import_path_csv(const std::string& file);
void export_path_binary(const WienerPath& path, const std::string& file);
WienerPath import_path_binary(const std::string& file);

// Trajectory exports; the header embeds the config hash and seed lineage so a
// replay can be lineage-checked.
void export_trajectory_csv(const Trajectory& traj, const std::string& file);
void export_trajectory_binary(const Trajectory& traj, const std::string& file);

// Gnuplot-friendly series: one row per recorded time, one column per mode.
void export_trajectory_gnuplot(const Trajectory& traj, const std::string& file);

// Delimited kernel table: "dim", "shape" header lines, then one row per
// sample holding the integer offset indices and the kernel value.
KernelSpec import_kernel_table(const std::string& file);
void export_kernel_table(const KernelTables& tables, const std::string& file);

} // namespace nlch

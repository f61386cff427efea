#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "superdiff/meshes.hpp"
#include "superdiff/quadrature.hpp"

namespace superdiff {

struct MeshSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points_per_decade = 0;
};

// Declarative sweep definition: one independent task per gamma value.
struct SweepSpec {
  LinearMesh gamma_mesh;
  MeshSpec t_mesh;
  MeshSpec s_mesh;
  double rel_tol_inner = 1e-10;
  double rel_tol_outer = 1e-8;
  double abs_tol = 1e-300;
  int max_cells = 200000;
  int max_panel_depth = 60;
  std::filesystem::path output_dir;
  int parallelism = 1;

  QuadratureConfig inner_cfg() const;
  QuadratureConfig outer_cfg() const;
  // Canonical text form; its hash keys plans and artifacts.
  std::string canonical() const;
  std::uint64_t checksum() const;

  static SweepSpec parse_file(const std::filesystem::path& path);
  static SweepSpec parse(const std::string& text);
};

enum class TaskStatus { Pending, Done, Failed };

struct TaskResult {
  double gamma = 0.0;
  TaskStatus status = TaskStatus::Pending;
  std::filesystem::path field_path;
  std::filesystem::path qfield_path;
  std::filesystem::path gcurve_path;
  std::filesystem::path accuracy_path;
  double wall_time_s = 0.0;
  std::uint64_t checksum = 0;
  std::string diagnostics;
};

// gamma with fixed two-decimal formatting, e.g. "0.50".
std::string gamma_tag(double gamma);

// One stub per gamma, ascending; tasks whose artifacts already exist on
// disk (and match the spec checksum) come back Done.
std::vector<TaskResult> plan(const SweepSpec& spec);

// Execute every Pending task on a local worker pool. Artifacts are written
// to temp names and renamed, so an interrupted run never leaves a partial
// file under its final name. Failures are recorded, not propagated.
// max_tasks limits how many pending tasks this call executes (0 = all);
// only_gamma restricts execution to one mesh value (NaN = no restriction).
void run(const SweepSpec& spec, std::vector<TaskResult>& tasks,
         int max_tasks = 0,
         double only_gamma = std::numeric_limits<double>::quiet_NaN());

// Run the per-gamma pipeline for one value and write its artifacts into
// spec.output_dir; entry point for external schedulers (one task per job).
TaskResult run_single(const SweepSpec& spec, double gamma,
                      int inner_threads = 1);

// Boundary CSV + g-curve bundle + manifest from the artifacts on disk.
// Aggregation order is independent of discovery order. Returns the gammas
// with no complete artifact set.
std::vector<double> aggregate(const SweepSpec& spec);

}  // namespace superdiff

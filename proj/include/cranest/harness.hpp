#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cranest/admm.hpp"
#include "cranest/functional.hpp"
#include "cranest/keyvalue.hpp"
#include "cranest/scenario.hpp"

namespace cranest {

struct SolverEntry {
  Preset kind = Preset::full;
  double fraction = kDefaultPresetFraction;

  std::string label() const { return preset_name(kind); }
};

/// One pilot-length sweep. `scenario.layout.pilot_length` and `scenario.seed`
/// are ignored; every (L, trial) cell gets its own instance.
struct SweepSpec {
  ScenarioSpec scenario;
  std::vector<Index> pilot_lengths;
  int trials = 1;
  std::vector<SolverEntry> solvers;
  std::uint64_t base_seed = 0;
  double rel_threshold = 0.1;
  SolverConfig solver;            // reg is replaced per instance by the preset
  std::optional<double> beta_scale;  // beta = scale * (alpha1 + alpha2) when set
  bool linear_average = false;

  void validate() const;

  /// Dotted keys, e.g. scenario.K = 100, pilot_lengths = 30,40. Unknown keys are rejected.
  static SweepSpec from_keyvalues(const KeyValues& kv);
  static SweepSpec load(const std::string& path);
};

/// Seed of the instance used by every cell of one trial.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

struct SweepRow {
  std::string solver;
  Index pilot_length = 0;
  int trial = 0;
  double nmse_db = 0.0;         // NaN when diverged
  Index detection_errors = 0;   // -1 when diverged
  double wall_time_s = 0.0;
  int inner_iterations = 0;
  bool diverged = false;
};

/// Rows ordered by solver (spec order), then L, then trial, whatever `jobs` is.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);

struct AggregateRow {
  std::string solver;
  Index pilot_length = 0;
  int count = 0;     // non-diverged rows
  int diverged = 0;
  double nmse_mean = 0.0, nmse_stderr = 0.0;
  double detection_mean = 0.0, detection_stderr = 0.0;
  double time_mean = 0.0, time_stderr = 0.0;
  double iterations_mean = 0.0;
};

/// Means and standard errors per (solver, L), in first-appearance order.
/// NMSE is averaged in dB unless `linear_average`, in which case the linear
/// ratios are averaged and converted back.
std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows, bool linear_average = false);

bool any_diverged(const std::vector<SweepRow>& rows);

/// Deterministic columns only; wall times go to write_timings_csv.
void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_timings_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& agg);

enum class PlotMetric { nmse, detection, runtime };

PlotMetric parse_plot_metric(const std::string& name);
std::string plot_metric_name(PlotMetric metric);

/// SVG line chart (one series per solver, x = L) plus the same data as CSV
/// at `out_path` with the extension replaced by .csv.
void emit_plot(const std::vector<AggregateRow>& agg, PlotMetric metric, const std::string& out_path);

/// Runs the sweep and writes rows.csv, timings.csv, aggregate.csv and the
/// three plots into `out_dir`. Returns the rows.
std::vector<SweepRow> run_sweep_to_directory(const SweepSpec& spec, const std::string& out_dir, int jobs);

}  // namespace cranest

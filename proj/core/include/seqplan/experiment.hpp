#pragma once

#include <utility>

#include "seqplan/scene_io.hpp"

namespace seqplan {

struct ExperimentConfig {
  int runs = 25;
  std::uint64_t seed0 = 1;
  double jitter = 0.002;  // m; 0 disables all per-run perturbation
  int workers = 1;
};

struct MetricStat {
  double mean = 0.0;
  double sigma = 0.0;
  int count = 0;  // runs contributing to the statistic
};

/// Cross-run aggregation of seeded planning runs on one scene.
struct AggregateStats {
  int runs = 0;
  /// Best-sequence histogram, ordered by descending frequency then
  /// lexicographic key. Keys join object ids with '-'; runs without a
  /// valid sequence count under "(none)". Frequencies sum to runs.
  std::vector<std::pair<std::string, int>> histogram;

  MetricStat first_ranked_cost_per_node;
  MetricStat second_ranked_cost_per_node;

  /// Pruned percentages per reason (and "total"), on two bases: the
  /// worst-case tree size with pruned subtrees attributed to their
  /// reason, and the visited node count with direct counts only.
  std::map<std::string, MetricStat> pruned_pct_worst_case;
  std::map<std::string, MetricStat> pruned_pct_visited;

  /// Percentage of evaluated episodes with c_w above the threshold.
  MetricStat significant_pct;
};

struct ExperimentResult {
  AggregateStats stats;
  std::vector<RunRecord> records;
};

/// Runs `runs` seeded plans (seeds seed0 .. seed0+runs-1). Each run
/// jitters object positions by up to `jitter`, re-settles, perturbs
/// grasp-candidate order, and plans. jitter = 0 keeps every run
/// canonical, so the histogram degenerates to a single sequence.
ExperimentResult run_experiment(const SceneBundle& bundle,
                                const ExperimentConfig& cfg);

std::string histogram_csv(const AggregateStats& stats);
std::string stats_csv(const AggregateStats& stats);
std::string render_aggregate(const AggregateStats& stats);

/// Applies uniform position jitter in x/y to every object (deterministic
/// in the seed) without re-settling; callers settle afterwards.
Scene jitter_scene(const Scene& scene, std::uint64_t seed, double jitter);

}  // namespace seqplan

#pragma once

#include <optional>
#include <vector>

#include "seqplan/costs.hpp"
#include "seqplan/dynamics.hpp"

namespace seqplan {

enum class FailureKind {
  none,
  active_moved,       // active object drifted beyond grasp tolerance
  out_of_workspace,   // a passive object left the workspace box
  planning_failure,   // no collision-free grasp candidate
};

const char* to_string(FailureKind kind);

/// Classification of one predicted removal episode.
struct PredictionOutcome {
  CostReport report;
  bool valid = false;
  double threshold = 2.0;
  FailureKind failure = FailureKind::none;
};

/// Deterministic seed-driven reordering of grasp candidates, used to
/// emulate motion-planner variability across experiment runs.
struct GraspPerturbation {
  bool enabled = false;
  std::uint64_t seed = 0;
};

/// Enumerates grasp-and-extract candidates for the object: a top grasp
/// (descend -z, extract +z) first, then side grasps along the object's
/// principal +x, -x, +y, -y axes. Candidates whose swept gripper path
/// intersects static geometry are dropped; passive objects are ignored at
/// this stage. Throws NoFeasibleGrasp when nothing survives.
std::vector<ManipulationPlan> generate_grasps(const Scene& scene,
                                              const std::string& object_id,
                                              const SimConfig& cfg = {});

/// Simulates the first feasible grasp candidate and classifies the result
/// against the damage threshold. valid ⇔ no failure and c_w <= threshold.
PredictionOutcome predict_outcome(const Scene& scene,
                                  const std::string& active_id,
                                  const Weights& w, double threshold,
                                  const SimConfig& cfg = {});

/// predict_outcome plus the raw episode and the executed plan, for callers
/// that chain scenes (the planner, the closed-loop executive).
struct PredictionDetail {
  PredictionOutcome outcome;
  std::optional<EpisodeResult> episode;    // absent on planning_failure
  std::optional<ManipulationPlan> plan;    // absent on planning_failure
};

PredictionDetail predict_outcome_detail(
    const Scene& scene, const std::string& active_id, const Weights& w,
    double threshold, const SimConfig& cfg = {},
    const GraspPerturbation& perturbation = {});

}  // namespace seqplan

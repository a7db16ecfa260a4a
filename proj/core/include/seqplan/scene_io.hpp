#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "seqplan/planner.hpp"

namespace seqplan {

inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kRecordSchemaVersion = 1;

/// A parsed scene file: the scene itself plus the cost weights, damage
/// threshold, and configuration overrides it carries.
struct SceneBundle {
  Scene scene;
  Weights weights;
  double threshold = 2.0;
  PlannerConfig planner;
  SimConfig sim;
};

/// Parses and validates a scene file. Malformed text raises ParseError
/// with line/column; semantic violations raise ValidationError naming the
/// violated invariant. Omitted fields receive documented defaults.
SceneBundle parse_scene_file(const std::filesystem::path& path);
SceneBundle parse_scene_text(const std::string& text,
                             const std::string& origin = "<string>");

/// Canonical serialization; parse(serialize(bundle)) round-trips to an
/// identical bundle.
std::string serialize_scene(const SceneBundle& bundle);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string scene_hash(const SceneBundle& bundle);

/// Applies defaults from a JSON config file (the SEQPLAN_CONFIG format)
/// underneath whatever the bundle already carries. Precedence stays:
/// built-ins < config file < scene file < caller flags.
void apply_config_file(SceneBundle& bundle,
                       const std::filesystem::path& config_path);

// ---- deterministic report rendering -------------------------------------

std::string render_cost_report(const CostReport& report);
std::string render_outcome(const PredictionOutcome& outcome,
                           const std::string& active_id);
std::string render_plan_result(const PlanResult& result,
                               const std::string& scene_label,
                               bool with_nodes = false);

/// Everything needed to reproduce one planning run: re-running with the
/// recorded seed and scene yields the identical PlanResult. wall_time_ms
/// is informational and excluded from reproducibility comparisons.
struct RunRecord {
  int schema_version = kRecordSchemaVersion;
  std::optional<std::uint64_t> seed;
  std::string scene_hash;
  PlanResult plan;
  double wall_time_ms = 0.0;
};

std::string run_record_to_json(const RunRecord& record);

}  // namespace seqplan

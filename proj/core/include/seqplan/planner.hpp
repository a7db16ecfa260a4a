#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqplan/prediction.hpp"

namespace seqplan {

enum class PruneReason {
  known_subtree,       // configuration matched an already-solved node
  cost_bound,          // accumulated cost reached the incumbent best
  active_object_moved, // episode failed: active drifted before the grasp
  out_of_workspace,    // episode failed: passive object left the workspace
  planning_failure,    // no feasible grasp for the chosen object
};

const char* to_string(PruneReason reason);
inline constexpr int kPruneReasonCount = 5;

enum class NodeStatus { pending, evaluated, pruned };

using NodeId = int;

/// One configuration in the removal tree. Non-root nodes were created by
/// simulating the removal of `active` from the parent's scene; `scene` is
/// the settled configuration entered here, `remaining` the objects still
/// present in it. A node is a leaf once a single object remains: its final
/// removal is taken as free, subject to a feasible grasp existing.
struct SearchNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  int depth = 0;                        // root = 0
  std::vector<std::string> remaining;   // sorted ascending
  std::string active;                   // empty at the root
  Scene scene;                          // empty for nodes pruned unsimulated
  double episode_cost = 0.0;
  double accumulated_cost = 0.0;
  NodeStatus status = NodeStatus::pending;
  std::optional<PruneReason> prune_reason;
  CostReport report;

  bool is_leaf() const { return remaining.size() <= 1; }
};

struct PlannerConfig {
  int max_objects = 6;           // scenes above this raise RefusesLargeScene
  double threshold = 2.0;        // damage classification threshold on c_w
  double similarity_pos = 0.005; // known-subtree pose tolerance, m
  double similarity_ang_deg = 2.0;
  int workers = 1;

  bool prune_known_subtree = true;
  bool prune_cost_bound = true;
  bool prune_active_moved = true;
  bool prune_out_of_workspace = true;
  bool prune_planning_failure = true;

  std::string tie_break = "lexicographic";

  /// Optional run seed. When set together with jitter > 0, grasp-candidate
  /// order is perturbed per node; the caller additionally jitters the
  /// input scene. Unset means fully canonical behaviour.
  std::optional<std::uint64_t> seed;
  double jitter = 0.0;  // m, documented cap 0.002 for experiments

  void set_prune(PruneReason reason, bool enabled);
  bool prunes(PruneReason reason) const;
  void validate() const;  // throws ValidationError
};

/// Worst-case tree size sum over levels: Σ_{i=1..n} n!/i!.
/// Exact in integers; n outside [1, 12] throws ValidationError.
std::uint64_t worst_case_tree_size(int n);

/// Removal tree handle: owns the root configuration and, after planning,
/// every materialized node. Structural enumeration walks the full
/// permutation tree without touching the simulator.
class SearchTree {
 public:
  SearchTree(Scene root_scene, PlannerConfig cfg);

  NodeId root() const { return 0; }
  const SearchNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<SearchNode>& nodes() const { return nodes_; }
  int object_count() const { return n_; }

  /// Visits every node of the fully expanded tree (no pruning, no
  /// simulation) and returns the visit count.
  std::uint64_t fully_expanded_count() const;

  /// Visit counts keyed by level, where a node's level is its number of
  /// remaining objects (root = n, leaves = 1).
  std::map<int, std::uint64_t> fully_expanded_level_counts() const;

  PlannerConfig config() const { return cfg_; }

 private:
  friend struct PlanDriver;
  int n_ = 0;
  PlannerConfig cfg_;
  std::vector<SearchNode> nodes_;
};

/// Validates the scene against the planner cap and returns a tree seeded
/// with the root configuration.
SearchTree build_tree(const Scene& scene, const PlannerConfig& cfg = {});

struct RankedSequence {
  std::vector<std::string> sequence;  // permutation of the scene's ids
  double total_cost = 0.0;
};

struct PlanStats {
  int n_objects = 0;
  std::uint64_t worst_case_nodes = 0;
  int visited = 0;    // materialized nodes: evaluated + pruned
  int evaluated = 0;  // fully expanded nodes (root and completed leaves included)
  std::map<PruneReason, int> pruned;  // direct prune counts
  /// Pruned nodes plus their never-materialized descendants, i.e. the
  /// worst-case subtree size removed by each reason.
  std::map<PruneReason, std::uint64_t> pruned_subtree;
  int episodes = 0;             // episodes the search consumed
  int significant = 0;          // evaluated episodes with c_w > threshold
};

/// Per-node summary for records and reports.
struct NodeRecord {
  NodeId id = 0;
  std::optional<NodeId> parent;
  int depth = 0;
  std::string active;
  std::vector<std::string> remaining;
  double episode_cost = 0.0;
  double accumulated_cost = 0.0;
  NodeStatus status = NodeStatus::pending;
  std::optional<PruneReason> prune_reason;
  double c_p = 0.0, c_l = 0.0, c_v = 1.0, c_w = 1.0;
};

struct PlanResult {
  /// Completed sequences with finite total cost, ascending by
  /// (total_cost, lexicographic sequence). Empty when no valid sequence
  /// exists.
  std::vector<RankedSequence> ranked;
  PlanStats stats;
  std::vector<NodeRecord> nodes;

  const RankedSequence* best() const {
    return ranked.empty() ? nullptr : &ranked.front();
  }
};

/// Depth-first branch-and-bound over removal permutations. Children are
/// expanded in ascending object-id order, the incumbent best total cost
/// bounds the search, and episodes are reused across matching
/// configurations. Deterministic: identical scene and config give an
/// identical PlanResult, for any worker count.
PlanResult plan_sequence(const Scene& scene, const Weights& w,
                         const PlannerConfig& cfg = {},
                         const SimConfig& sim = {});

/// Plans the remainder after `executed` objects have already been removed
/// from the original scene. Pure delegation to plan_sequence on the
/// current scene; `executed` is validated against it.
PlanResult replan(const Scene& scene_after_execution,
                  const std::vector<std::string>& executed, const Weights& w,
                  const PlannerConfig& cfg = {}, const SimConfig& sim = {});

/// Parallel episode evaluation primitive: all inputs must share a tree
/// level and have evaluated parents. Episodes run on independent scene
/// copies; results are returned in input order, so the outcome is
/// identical to serial evaluation.
struct LevelEvalInput {
  const Scene* scene = nullptr;  // parent configuration
  std::string active;
  std::uint64_t grasp_salt = 0;
};

std::vector<PredictionDetail> evaluate_level_parallel(
    const std::vector<LevelEvalInput>& inputs, int workers, const Weights& w,
    const PlannerConfig& cfg, const SimConfig& sim);

}  // namespace seqplan

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "topoplan/cgraph.hpp"

namespace topoplan {

// Abstract undirected weighted graph the search runs on. Implementations must
// report neighbors sorted by vertex id.
class SearchGraph {
 public:
  virtual ~SearchGraph() = default;
  virtual int vertex_count() const = 0;
  virtual const std::vector<CgEdge>& neighbors(int v) const = 0;
};

// Explicit adjacency-list graph, used for tests and small fixtures.
class AdjacencyGraph final : public SearchGraph {
 public:
  explicit AdjacencyGraph(int n) : adjacency_(n) {}
  void add_edge(int a, int b, double cost);
  int vertex_count() const override { return static_cast<int>(adjacency_.size()); }
  const std::vector<CgEdge>& neighbors(int v) const override { return adjacency_[v]; }

 private:
  std::vector<std::vector<CgEdge>> adjacency_;
};

class ConfigGraphView final : public SearchGraph {
 public:
  explicit ConfigGraphView(const ConfigGraph& graph) : graph_(&graph) {}
  int vertex_count() const override { return graph_->vertex_count(); }
  const std::vector<CgEdge>& neighbors(int v) const override {
    return graph_->neighbors(v);
  }

 private:
  const ConfigGraph* graph_;
};

enum class NagsVariant { kModified, kGeneralized };

struct GoalSpec {
  // Single goal graph vertex, or (when unset) every vertex flagged in mask.
  std::optional<int> single;
  std::vector<char> mask;

  static GoalSpec vertex(int id);
  static GoalSpec any_of(std::vector<char> mask);
  bool is_goal(int cg) const;
};

struct SearchConfig {
  NagsVariant variant = NagsVariant::kGeneralized;
  int n_classes = 1;
  GoalSpec goal;
  bool distinct_goal_positions_are_distinct_classes = true;
  // Test hook: overrides the heap tie rank of the i-th inserted entry.
  std::vector<int> tie_rank;
  std::int64_t max_pops = -1;  // safety cap; -1 = unbounded
};

struct NagVertex {
  int cg = -1;
  double g = 0.0;
  int came_from = -1;           // NAG vertex id, -1 only for the start
  std::vector<int> stored_ps;   // parent-set snapshot carried from the linker
  bool popped = false;
};

// The search graph G_N = (V_N, E_N) built over (CG vertex, class) pairs.
class Nag {
 public:
  std::vector<NagVertex> vertices;
  std::vector<std::vector<int>> edges;  // E_N adjacency, sorted per vertex
  int start = -1;

  int size() const { return static_cast<int>(vertices.size()); }
  bool has_edge(int a, int b) const;
  void add_edge(int a, int b);
};

// Parent set of a NAG vertex: its E_N neighborhood (the start carries a
// self-reference encoded as a self-loop).
std::vector<int> compute_ps(int zeta, const Nag& nag);

// Equivalence of NAG vertices: same CG vertex and adjacent (or overlapping)
// parent sets.
bool equivalent(int z1, int z2, const Nag& nag);

struct SearchResult {
  Nag nag;
  std::vector<int> class_reps;  // popped goal vertices, one per class found
  bool exhausted = false;       // heap emptied before n_classes classes
  std::vector<double> pop_costs;  // g of every pop, in pop order
};

// Best-first search with homotopy-aware vertex identity. The Generalized
// variant wires vertices into (V_N, E_N) when popped and handles equivalent
// successors before creating new ones.
SearchResult search_nag(const SearchGraph& graph, int start_cg,
                        const SearchConfig& cfg);

// Backtracks came_from chains; returns CG vertex id sequences, start first.
// Throws std::logic_error on a broken chain.
std::vector<std::vector<int>> extract_paths(const Nag& nag,
                                            const std::vector<int>& goal_hits);

// One homotopically distinct initial guess.
struct GuessPath {
  std::vector<Eigen::Vector2d> base;
  std::vector<Eigen::Vector3d> elbow;
  std::vector<double> t;
  std::vector<int> cg_ids;
};

// Runs the search over a configuration graph and decodes each class
// representative into base/elbow/t sequences.
std::vector<GuessPath> modified_nags(const ConfigGraph& graph, const RobotModel& robot,
                                     const EePath& path, int start_id,
                                     const SearchConfig& cfg,
                                     SearchResult* result_out = nullptr);

// Debug dump of the NAG: one JSON record per vertex.
std::string dump_nag(const Nag& nag);

}  // namespace topoplan

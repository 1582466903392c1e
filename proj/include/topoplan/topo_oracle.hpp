#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "topoplan/nags.hpp"

namespace topoplan {

// Freely reduced word of signed obstacle-ray crossings. Letter k (1-based
// anchor index) is stored as +-k; sign is the crossing direction.
struct HSignature {
  std::vector<int> word;

  bool operator==(const HSignature&) const = default;
  bool operator<(const HSignature& other) const { return word < other.word; }
  HSignature inverse() const;
  std::string str() const;
};

struct DegenerateCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Crossing word of the polyline against vertical rays cast upward from each
// anchor. Vertices that land exactly on a ray are nudged by 1e-9 first;
// throws DegenerateCrossing if that fails to clear the ray.
HSignature h_signature(const std::vector<Eigen::Vector2d>& path,
                       const std::vector<Eigen::Vector2d>& anchors);

struct ClassEnumeration {
  struct Class {
    HSignature signature;
    double best_cost = 0.0;
    std::vector<int> best_path;  // graph vertex ids
    long long path_count = 0;
  };
  std::vector<Class> classes;  // sorted by signature word
};

struct EnumerateOptions {
  int vertex_cap = 60;
  long long step_budget = 50'000'000;  // DFS edge-visit budget
  // xy position per graph vertex, required for signatures.
};

// Brute-force ground truth: enumerates all simple start->goal paths, groups
// them by h-signature of their xy projection, and keeps the cheapest
// representative per class. Throws CapExceeded past the caps.
ClassEnumeration enumerate_classes(const SearchGraph& graph,
                                   const std::vector<Eigen::Vector2d>& xy,
                                   int start, int goal,
                                   const std::vector<Eigen::Vector2d>& anchors,
                                   const EnumerateOptions& options = {});

}  // namespace topoplan

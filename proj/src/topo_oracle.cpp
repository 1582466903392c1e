#include "topoplan/topo_oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace topoplan {

namespace {

constexpr double kNudge = 1e-9;

void nudge_off_rays(std::vector<Eigen::Vector2d>& pts,
                    const std::vector<Eigen::Vector2d>& anchors) {
  for (auto& p : pts) {
    for (const auto& a : anchors) {
      if (p.x() == a.x()) p.x() += kNudge;
    }
    for (const auto& a : anchors) {
      if (p.x() == a.x())
        throw DegenerateCrossing("path vertex on an anchor ray after perturbation");
    }
  }
}

// Signed crossing letters of segment p->q, ordered along the segment.
void segment_crossings(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                       const std::vector<Eigen::Vector2d>& anchors,
                       std::vector<std::pair<double, int>>& out) {
  out.clear();
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const double dx1 = p.x() - anchors[j].x();
    const double dx2 = q.x() - anchors[j].x();
    if (dx1 * dx2 >= 0.0) continue;
    const double t = dx1 / (dx1 - dx2);
    const double y_int = p.y() + t * (q.y() - p.y());
    if (y_int == anchors[j].y())
      throw DegenerateCrossing("segment passes exactly through an anchor");
    if (y_int < anchors[j].y()) continue;  // ray points upward
    const int sign = q.x() > p.x() ? 1 : -1;
    out.emplace_back(t, sign * static_cast<int>(j + 1));
  }
  std::sort(out.begin(), out.end());
}

void reduce_append(std::vector<int>& word, int letter) {
  if (!word.empty() && word.back() == -letter)
    word.pop_back();
  else
    word.push_back(letter);
}

}  // namespace

HSignature HSignature::inverse() const {
  HSignature inv;
  inv.word.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) inv.word.push_back(-*it);
  return inv;
}

std::string HSignature::str() const {
  std::string s;
  for (int letter : word) {
    if (!s.empty()) s += ' ';
    s += (letter > 0 ? '+' : '-');
    s += std::to_string(std::abs(letter));
  }
  return s.empty() ? "()" : s;
}

HSignature h_signature(const std::vector<Eigen::Vector2d>& path,
                       const std::vector<Eigen::Vector2d>& anchors) {
  std::vector<Eigen::Vector2d> pts = path;
  nudge_off_rays(pts, anchors);
  HSignature sig;
  std::vector<std::pair<double, int>> crossings;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    segment_crossings(pts[i], pts[i + 1], anchors, crossings);
    for (const auto& [t, letter] : crossings) reduce_append(sig.word, letter);
  }
  return sig;
}

ClassEnumeration enumerate_classes(const SearchGraph& graph,
                                   const std::vector<Eigen::Vector2d>& xy,
                                   int start, int goal,
                                   const std::vector<Eigen::Vector2d>& anchors,
                                   const EnumerateOptions& options) {
  if (graph.vertex_count() > options.vertex_cap)
    throw CapExceeded("enumerate_classes: graph above vertex cap");
  if (static_cast<int>(xy.size()) != graph.vertex_count())
    throw std::invalid_argument("enumerate_classes: xy size mismatch");

  std::vector<Eigen::Vector2d> pts = xy;
  nudge_off_rays(pts, anchors);

  // Crossing letters per directed edge, precomputed once.
  const int n = graph.vertex_count();
  std::vector<std::vector<std::vector<int>>> letters(n);
  std::vector<std::pair<double, int>> scratch;
  for (int u = 0; u < n; ++u) {
    const auto& nbrs = graph.neighbors(u);
    letters[u].resize(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      segment_crossings(pts[u], pts[nbrs[i].to], anchors, scratch);
      for (const auto& [t, letter] : scratch) letters[u][i].push_back(letter);
    }
  }

  struct Op {
    bool pushed;
    int value;  // the value removed, when a reduction popped
  };
  std::vector<int> word;
  std::vector<char> on_path(n, 0);
  std::vector<int> path;
  std::map<std::vector<int>, ClassEnumeration::Class> classes;
  long long steps = 0;
  double cost = 0.0;

  auto apply_letters = [&word](const std::vector<int>& ls, std::vector<Op>& journal) {
    for (int letter : ls) {
      if (!word.empty() && word.back() == -letter) {
        journal.push_back({false, word.back()});
        word.pop_back();
      } else {
        journal.push_back({true, letter});
        word.push_back(letter);
      }
    }
  };
  auto undo_letters = [&word](const std::vector<Op>& journal) {
    for (auto it = journal.rbegin(); it != journal.rend(); ++it) {
      if (it->pushed)
        word.pop_back();
      else
        word.push_back(it->value);
    }
  };

  auto dfs = [&](auto&& self, int u) -> void {
    if (u == goal) {
      auto& cls = classes[word];
      if (cls.path_count == 0 || cost < cls.best_cost) {
        cls.best_cost = cost;
        cls.best_path = path;
        cls.signature.word = word;
      }
      ++cls.path_count;
      return;
    }
    const auto& nbrs = graph.neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const int v = nbrs[i].to;
      if (on_path[v]) continue;
      if (++steps > options.step_budget)
        throw CapExceeded("enumerate_classes: step budget exceeded");
      std::vector<Op> journal;
      apply_letters(letters[u][i], journal);
      on_path[v] = 1;
      path.push_back(v);
      cost += nbrs[i].cost;
      self(self, v);
      cost -= nbrs[i].cost;
      path.pop_back();
      on_path[v] = 0;
      undo_letters(journal);
    }
  };

  on_path[start] = 1;
  path.push_back(start);
  dfs(dfs, start);

  ClassEnumeration out;
  for (auto& [w, cls] : classes) out.classes.push_back(std::move(cls));
  return out;
}

}  // namespace topoplan

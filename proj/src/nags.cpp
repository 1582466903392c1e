#include "topoplan/nags.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace topoplan {

void AdjacencyGraph::add_edge(int a, int b, double cost) {
  adjacency_[a].push_back({b, cost});
  adjacency_[b].push_back({a, cost});
  auto by_id = [](const CgEdge& x, const CgEdge& y) { return x.to < y.to; };
  std::sort(adjacency_[a].begin(), adjacency_[a].end(), by_id);
  std::sort(adjacency_[b].begin(), adjacency_[b].end(), by_id);
}

GoalSpec GoalSpec::vertex(int id) {
  GoalSpec g;
  g.single = id;
  return g;
}

GoalSpec GoalSpec::any_of(std::vector<char> mask) {
  GoalSpec g;
  g.mask = std::move(mask);
  return g;
}

bool GoalSpec::is_goal(int cg) const {
  if (single) return *single == cg;
  return cg >= 0 && cg < static_cast<int>(mask.size()) && mask[cg];
}

bool Nag::has_edge(int a, int b) const {
  const auto& nbrs = edges[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

void Nag::add_edge(int a, int b) {
  auto insert_sorted = [](std::vector<int>& nbrs, int v) {
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
    if (it == nbrs.end() || *it != v) nbrs.insert(it, v);
  };
  insert_sorted(edges[a], b);
  if (a != b) insert_sorted(edges[b], a);
}

std::vector<int> compute_ps(int zeta, const Nag& nag) { return nag.edges[zeta]; }

namespace {

// Parent set used by the equivalence relation: the live E_N neighborhood once
// the vertex is wired in, otherwise the snapshot carried from its linker.
const std::vector<int>& ps_for_equiv(const Nag& nag, int id) {
  if (!nag.edges[id].empty()) return nag.edges[id];
  return nag.vertices[id].stored_ps;
}

// True when the sets share a member or contain an E_N-adjacent pair.
bool sets_adjacent(const Nag& nag, const std::vector<int>& a,
                   const std::vector<int>& b) {
  for (int x : a) {
    for (int y : b) {
      if (x == y || nag.has_edge(x, y)) return true;
    }
  }
  return false;
}

struct HeapEntry {
  double g = 0.0;
  int cg = -1;
  std::int64_t seq = 0;
  std::int64_t rank = 0;
  int id = -1;
};

struct HeapCompare {
  // std::priority_queue is a max-heap; return true when a pops later than b.
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.g != b.g) return a.g > b.g;
    if (a.rank != b.rank) return a.rank > b.rank;
    if (a.cg != b.cg) return a.cg > b.cg;
    return a.seq > b.seq;
  }
};

}  // namespace

bool equivalent(int z1, int z2, const Nag& nag) {
  if (nag.vertices[z1].cg != nag.vertices[z2].cg) return false;
  return sets_adjacent(nag, ps_for_equiv(nag, z1), ps_for_equiv(nag, z2));
}

SearchResult search_nag(const SearchGraph& graph, int start_cg,
                        const SearchConfig& cfg) {
  if (start_cg < 0 || start_cg >= graph.vertex_count())
    throw std::invalid_argument("search_nag: start vertex not in graph");
  if (cfg.n_classes < 1)
    throw std::invalid_argument("search_nag: n_classes must be >= 1");
  if (!cfg.goal.single && cfg.goal.mask.empty())
    throw std::invalid_argument("search_nag: goal set is empty");

  SearchResult result;
  Nag& nag = result.nag;
  std::vector<std::vector<int>> by_cg(graph.vertex_count());

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare> heap;
  std::int64_t seq = 0;
  auto rank_of = [&cfg](std::int64_t s) -> std::int64_t {
    if (s < static_cast<std::int64_t>(cfg.tie_rank.size())) return cfg.tie_rank[s];
    return s;
  };
  auto push = [&](int id) {
    heap.push({nag.vertices[id].g, nag.vertices[id].cg, seq, rank_of(seq), id});
    ++seq;
  };
  auto new_vertex = [&](int cg, double g, int came_from,
                        std::vector<int> stored_ps) {
    const int id = nag.size();
    nag.vertices.push_back({cg, g, came_from, std::move(stored_ps), false});
    nag.edges.emplace_back();
    by_cg[cg].push_back(id);
    return id;
  };
  // Equivalence candidates are drawn from every known NAG vertex at the CG
  // vertex, popped or still in the heap; the lowest id wins.
  auto find_equivalent = [&](int cg, const std::vector<int>& candidate_ps) {
    for (int id : by_cg[cg]) {
      if (sets_adjacent(nag, candidate_ps, ps_for_equiv(nag, id))) return id;
    }
    return -1;
  };
  auto goal_distinct = [&](int rep, int v) {
    if (nag.vertices[rep].cg == nag.vertices[v].cg) return !equivalent(rep, v, nag);
    if (cfg.distinct_goal_positions_are_distinct_classes) return true;
    return !sets_adjacent(nag, ps_for_equiv(nag, rep), ps_for_equiv(nag, v));
  };

  nag.start = new_vertex(start_cg, 0.0, -1, {0});
  nag.add_edge(0, 0);  // the start's self-reference
  push(nag.start);

  std::int64_t pops = 0;
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    // Copy fields up front: vertex creation below reallocates the vector.
    const double v_g = nag.vertices[top.id].g;
    const int v_cg = nag.vertices[top.id].cg;
    const int v_came_from = nag.vertices[top.id].came_from;
    if (nag.vertices[top.id].popped || top.g != v_g) continue;  // stale entry
    nag.vertices[top.id].popped = true;
    result.pop_costs.push_back(v_g);
    if (cfg.max_pops >= 0 && ++pops > cfg.max_pops) break;

    if (cfg.variant == NagsVariant::kGeneralized && v_came_from >= 0)
      nag.add_edge(top.id, v_came_from);

    if (cfg.goal.is_goal(v_cg)) {
      bool distinct = true;
      for (int rep : result.class_reps) {
        if (!goal_distinct(rep, top.id)) {
          distinct = false;
          break;
        }
      }
      if (distinct) {
        result.class_reps.push_back(top.id);
        if (static_cast<int>(result.class_reps.size()) >= cfg.n_classes) break;
      }
    }

    // Parent set snapshot carried by all successors of this expansion.
    const std::vector<int> candidate_ps = ps_for_equiv(nag, top.id);
    const auto& nbrs = graph.neighbors(v_cg);

    if (cfg.variant == NagsVariant::kModified) {
      for (const CgEdge& e : nbrs) {
        const double g_new = v_g + e.cost;
        const int w = find_equivalent(e.to, candidate_ps);
        if (w < 0) {
          const int id = new_vertex(e.to, g_new, top.id, candidate_ps);
          nag.add_edge(top.id, id);
          push(id);
        } else {
          nag.add_edge(top.id, w);
          NagVertex& wv = nag.vertices[w];
          if (g_new < wv.g && !wv.popped) {
            wv.g = g_new;
            wv.came_from = top.id;
            wv.stored_ps = candidate_ps;
            push(w);
          }
        }
      }
    } else {
      // Partition successors against the current NAG state, then handle
      // equivalent ones first.
      std::vector<int> targets(nbrs.size(), -1);
      for (std::size_t i = 0; i < nbrs.size(); ++i)
        targets[i] = find_equivalent(nbrs[i].to, candidate_ps);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (targets[i] < 0) continue;
        const int w = targets[i];
        nag.add_edge(top.id, w);
        const double g_new = v_g + nbrs[i].cost;
        NagVertex& wv = nag.vertices[w];
        if (g_new < wv.g && !wv.popped) {
          wv.g = g_new;
          wv.came_from = top.id;
          wv.stored_ps = candidate_ps;
          push(w);
        }
      }
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (targets[i] >= 0) continue;
        const double g_new = v_g + nbrs[i].cost;
        // New vertices join V_N and E_N only when visited.
        const int id = new_vertex(nbrs[i].to, g_new, top.id, candidate_ps);
        push(id);
      }
    }
  }

  result.exhausted =
      static_cast<int>(result.class_reps.size()) < cfg.n_classes;
  return result;
}

std::vector<std::vector<int>> extract_paths(const Nag& nag,
                                            const std::vector<int>& goal_hits) {
  std::vector<std::vector<int>> paths;
  paths.reserve(goal_hits.size());
  for (int hit : goal_hits) {
    std::vector<int> chain;
    int id = hit;
    while (id >= 0) {
      if (static_cast<int>(chain.size()) > nag.size())
        throw std::logic_error("extract_paths: broken came_from chain");
      chain.push_back(nag.vertices[id].cg);
      if (id == nag.start) break;
      id = nag.vertices[id].came_from;
      if (id < 0) throw std::logic_error("extract_paths: broken came_from chain");
    }
    std::reverse(chain.begin(), chain.end());
    paths.push_back(std::move(chain));
  }
  return paths;
}

std::vector<GuessPath> modified_nags(const ConfigGraph& graph, const RobotModel& robot,
                                     const EePath& path, int start_id,
                                     const SearchConfig& cfg,
                                     SearchResult* result_out) {
  ConfigGraphView view(graph);
  SearchResult result = search_nag(view, start_id, cfg);
  const auto cg_paths = extract_paths(result.nag, result.class_reps);

  std::vector<GuessPath> guesses;
  guesses.reserve(cg_paths.size());
  for (const auto& ids : cg_paths) {
    GuessPath guess;
    guess.cg_ids = ids;
    for (int id : ids) {
      const ReducedConfig rc = graph.decode(id);
      const FullConfigResult full = reduced_to_full(robot, path, rc);
      if (!full.ok())
        throw std::runtime_error("modified_nags: IK failed on a graph vertex");
      guess.base.push_back(full.config.base);
      guess.elbow.push_back(full.config.elbow);
      guess.t.push_back(rc.t);
    }
    guesses.push_back(std::move(guess));
  }
  if (result_out) *result_out = std::move(result);
  return guesses;
}

std::string dump_nag(const Nag& nag) {
  nlohmann::ordered_json root;
  root["start"] = nag.start;
  root["vertices"] = nlohmann::ordered_json::array();
  for (int id = 0; id < nag.size(); ++id) {
    const NagVertex& v = nag.vertices[id];
    nlohmann::ordered_json rec;
    rec["id"] = id;
    rec["cg"] = v.cg;
    rec["g"] = v.g;
    rec["came_from"] = v.came_from;
    rec["ps"] = compute_ps(id, nag);
    rec["popped"] = v.popped;
    root["vertices"].push_back(std::move(rec));
  }
  return root.dump(2) + "\n";
}

}  // namespace topoplan

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "topoplan/nags.hpp"
#include "topoplan/topo_oracle.hpp"

using namespace topoplan;

namespace {

// Plain Dijkstra, used as the optimality oracle.
std::vector<double> dijkstra(const SearchGraph& graph, int start,
                             std::vector<int>* parent = nullptr) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.vertex_count(), inf);
  if (parent) parent->assign(graph.vertex_count(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[start] = 0.0;
  heap.push({0.0, start});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const CgEdge& e : graph.neighbors(u)) {
      const double nd = d + e.cost;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        if (parent) (*parent)[e.to] = u;
        heap.push({nd, e.to});
      }
    }
  }
  return dist;
}

// Non-uniformly discretized fixture: two routes G-H-F and G-D-B-F of unequal
// step sizes plus a stub A off D, with GH < GD + DB < (cost to F).
//   ids: G=0, H=1, D=2, A=3, B=4, F=5
AdjacencyGraph nonuniform_graph() {
  AdjacencyGraph g(6);
  g.add_edge(0, 1, 2.0);  // G-H
  g.add_edge(0, 2, 1.0);  // G-D
  g.add_edge(2, 3, 1.2);  // D-A
  g.add_edge(2, 4, 1.5);  // D-B
  g.add_edge(4, 5, 1.5);  // B-F
  g.add_edge(1, 5, 2.0);  // H-F
  return g;
}

// Bridged square: A=0, B=1, C=2, D=3, all five edges unit cost.
AdjacencyGraph bridged_graph() {
  AdjacencyGraph g(4);
  g.add_edge(0, 1, 1.0);  // A-B
  g.add_edge(1, 2, 1.0);  // B-C
  g.add_edge(2, 3, 1.0);  // C-D
  g.add_edge(3, 0, 1.0);  // D-A
  g.add_edge(1, 3, 1.0);  // B-D
  return g;
}

// King's-graph corridor over an (nx+1) x (ny+1) lattice with blocked cells.
struct GridWorld {
  int nx, ny;
  std::vector<char> blocked;
  AdjacencyGraph graph;
  std::vector<Eigen::Vector2d> xy;

  GridWorld(int nx_, int ny_, const std::vector<std::pair<int, int>>& walls)
      : nx(nx_), ny(ny_), blocked((nx_ + 1) * (ny_ + 1), 0), graph(0) {
    for (auto [x, y] : walls) blocked[id(x, y)] = 1;
    AdjacencyGraph g((nx + 1) * (ny + 1));
    for (int y = 0; y <= ny; ++y) {
      for (int x = 0; x <= nx; ++x) {
        if (blocked[id(x, y)]) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int ux = x + dx, uy = y + dy;
            if (ux < 0 || ux > nx || uy < 0 || uy > ny) continue;
            if (blocked[id(ux, uy)]) continue;
            if (id(ux, uy) > id(x, y))
              g.add_edge(id(x, y), id(ux, uy), std::sqrt(double(dx * dx + dy * dy)));
          }
        }
      }
    }
    graph = std::move(g);
    for (int y = 0; y <= ny; ++y)
      for (int x = 0; x <= nx; ++x) xy.emplace_back(x, y);
  }

  int id(int x, int y) const { return y * (nx + 1) + x; }
};

std::vector<Eigen::Vector2d> path_xy(const GridWorld& world,
                                     const std::vector<int>& ids) {
  std::vector<Eigen::Vector2d> out;
  for (int id : ids) out.push_back(world.xy[id]);
  return out;
}

}  // namespace

TEST_CASE("compute_ps: start carries a self-reference") {
  AdjacencyGraph g(3);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  SearchConfig cfg;
  cfg.goal = GoalSpec::vertex(2);
  const SearchResult result = search_nag(g, 0, cfg);
  REQUIRE(result.nag.start == 0);
  CHECK(compute_ps(0, result.nag).front() == 0);  // self-loop
}

TEST_CASE("compute_ps counts expanding vertices") {
  // Hand-built NAG: vertex 3 touched by expansions of 0, 1, 2.
  Nag nag;
  nag.start = 0;
  for (int cg = 0; cg < 4; ++cg) nag.vertices.push_back({cg, 0.0, -1, {}, true});
  nag.edges.assign(4, {});
  nag.add_edge(3, 0);
  nag.add_edge(3, 1);
  nag.add_edge(3, 2);
  CHECK(compute_ps(3, nag) == std::vector<int>{0, 1, 2});
  CHECK(compute_ps(1, nag) == std::vector<int>{3});
}

TEST_CASE("equivalent: identity and shared-parent convention") {
  Nag nag;
  nag.start = 0;
  // 0 = start, 1 = shared parent, 2 and 3 both at cg 9 with parent 1.
  nag.vertices.push_back({0, 0.0, -1, {0}, true});
  nag.vertices.push_back({5, 1.0, 0, {0}, true});
  nag.vertices.push_back({9, 2.0, 1, {}, true});
  nag.vertices.push_back({9, 2.0, 1, {}, true});
  nag.edges.assign(4, {});
  nag.add_edge(0, 0);
  nag.add_edge(1, 0);
  nag.add_edge(2, 1);
  nag.add_edge(3, 1);
  CHECK(equivalent(2, 2, nag));
  CHECK(equivalent(2, 3, nag));   // PS(2) = PS(3) = {1}
  CHECK_FALSE(equivalent(1, 2, nag));  // different cg
}

TEST_CASE("equivalent: disjoint non-adjacent parent sets are distinct") {
  Nag nag;
  nag.start = 0;
  nag.vertices.push_back({0, 0.0, -1, {0}, true});
  nag.vertices.push_back({1, 1.0, 0, {0}, true});
  nag.vertices.push_back({2, 1.0, 0, {0}, true});
  nag.vertices.push_back({9, 2.0, 1, {}, true});
  nag.vertices.push_back({9, 2.0, 2, {}, true});
  nag.edges.assign(5, {});
  nag.add_edge(0, 0);
  nag.add_edge(1, 0);
  nag.add_edge(2, 0);
  nag.add_edge(3, 1);  // PS(3) = {1}
  nag.add_edge(4, 2);  // PS(4) = {2}, and (1,2) not in E_N
  CHECK_FALSE(equivalent(3, 4, nag));
}

TEST_CASE("free space: one class, Dijkstra-optimal path") {
  GridWorld world(6, 4, {});
  const int start = world.id(0, 2);
  const int goal = world.id(6, 2);
  const auto dist = dijkstra(world.graph, start);

  for (NagsVariant variant : {NagsVariant::kGeneralized, NagsVariant::kModified}) {
    SearchConfig cfg;
    cfg.variant = variant;
    cfg.n_classes = 1;
    cfg.goal = GoalSpec::vertex(goal);
    const SearchResult result = search_nag(world.graph, start, cfg);
    REQUIRE(result.class_reps.size() == 1);
    CHECK_FALSE(result.exhausted);
    CHECK(result.nag.vertices[result.class_reps[0]].g ==
          doctest::Approx(dist[goal]).epsilon(1e-12));
    const auto paths = extract_paths(result.nag, result.class_reps);
    CHECK(paths[0].front() == start);
    CHECK(paths[0].back() == goal);
  }
}

TEST_CASE("first goal pop matches Dijkstra on random obstacle grids") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<int, int>> walls;
    std::uniform_int_distribution<int> xd(1, 6), yd(0, 4);
    for (int i = 0; i < 6; ++i) walls.push_back({xd(rng), yd(rng)});
    GridWorld world(7, 4, walls);
    const int start = world.id(0, 2);
    const int goal = world.id(7, 2);
    if (world.blocked[start] || world.blocked[goal]) continue;
    const auto dist = dijkstra(world.graph, start);
    if (std::isinf(dist[goal])) continue;

    SearchConfig cfg;
    cfg.n_classes = 1;
    cfg.goal = GoalSpec::vertex(goal);
    const SearchResult result = search_nag(world.graph, start, cfg);
    REQUIRE(result.class_reps.size() == 1);
    CHECK(result.nag.vertices[result.class_reps[0]].g ==
          doctest::Approx(dist[goal]).epsilon(1e-12));

    // Pops are monotone in g.
    for (std::size_t i = 1; i < result.pop_costs.size(); ++i)
      CHECK(result.pop_costs[i] >= result.pop_costs[i - 1]);
  }
}

TEST_CASE("nonuniform fixture: generalized finds one class, modified splits") {
  const AdjacencyGraph g = nonuniform_graph();

  SearchConfig cfg;
  cfg.n_classes = 2;
  cfg.goal = GoalSpec::vertex(5);

  cfg.variant = NagsVariant::kGeneralized;
  const SearchResult gen = search_nag(g, 0, cfg);
  CHECK(gen.class_reps.size() == 1);
  CHECK(gen.exhausted);

  cfg.variant = NagsVariant::kModified;
  const SearchResult mod = search_nag(g, 0, cfg);
  CHECK(mod.class_reps.size() == 2);
  CHECK_FALSE(mod.exhausted);
}

TEST_CASE("bridged fixture: one class under every heap tie order") {
  const AdjacencyGraph g = bridged_graph();
  std::vector<int> ranks{0, 1, 2, 3, 4, 5, 6, 7};
  int permutations = 0;
  do {
    SearchConfig cfg;
    cfg.variant = NagsVariant::kGeneralized;
    cfg.n_classes = 2;
    cfg.goal = GoalSpec::vertex(2);
    cfg.tie_rank = ranks;
    const SearchResult result = search_nag(g, 0, cfg);
    CHECK(result.class_reps.size() == 1);
    CHECK(result.exhausted);
    ++permutations;
  } while (std::next_permutation(ranks.begin(), ranks.end()) &&
           permutations < 5000);
  CHECK(permutations == 5000);
}

TEST_CASE("two-class corridor: signatures differ and match the oracle") {
  // Middle-row pillar spanning three cells; paths go around top or bottom.
  // Parent sets only separate when the obstacle spans several cells, matching
  // the resolution guidance for the configuration graph.
  std::vector<std::pair<int, int>> walls = {{3, 1}, {4, 1}, {5, 1}};
  GridWorld world(8, 2, walls);
  const int start = world.id(0, 1);
  const int goal = world.id(8, 1);
  const std::vector<Eigen::Vector2d> anchors = {{4.5, 1.0}};

  SearchConfig cfg;
  cfg.variant = NagsVariant::kGeneralized;
  cfg.n_classes = 2;
  cfg.goal = GoalSpec::vertex(goal);
  const SearchResult result = search_nag(world.graph, start, cfg);
  REQUIRE(result.class_reps.size() == 2);
  const auto paths = extract_paths(result.nag, result.class_reps);

  const HSignature sig0 = h_signature(path_xy(world, paths[0]), anchors);
  const HSignature sig1 = h_signature(path_xy(world, paths[1]), anchors);
  CHECK_FALSE(sig0 == sig1);

  const auto oracle =
      enumerate_classes(world.graph, world.xy, start, goal, anchors);
  CHECK(oracle.classes.size() == 2);
  std::set<std::vector<int>> nags_words{sig0.word, sig1.word};
  std::set<std::vector<int>> oracle_words;
  for (const auto& cls : oracle.classes) oracle_words.insert(cls.signature.word);
  CHECK(nags_words == oracle_words);
}

TEST_CASE("class completeness against brute force on small corridors") {
  struct Scene {
    int nx;
    std::vector<std::pair<int, int>> walls;
    std::vector<Eigen::Vector2d> anchors;
  };
  const std::vector<Scene> scenes = {
      {4, {}, {}},
      {8, {{2, 1}, {3, 1}, {4, 1}}, {{3.5, 1.0}}},
      {8, {{2, 1}, {3, 1}, {5, 1}, {6, 1}}, {{2.5, 1.0}, {5.5, 1.0}}},
  };
  for (const Scene& scene : scenes) {
    GridWorld world(scene.nx, 2, scene.walls);
    const int start = world.id(0, 1);
    const int goal = world.id(scene.nx, 1);
    const auto oracle =
        enumerate_classes(world.graph, world.xy, start, goal, scene.anchors);
    REQUIRE(oracle.classes.size() >= 1);

    SearchConfig cfg;
    cfg.variant = NagsVariant::kGeneralized;
    cfg.n_classes = static_cast<int>(oracle.classes.size());
    cfg.goal = GoalSpec::vertex(goal);
    const SearchResult result = search_nag(world.graph, start, cfg);
    REQUIRE(result.class_reps.size() == oracle.classes.size());

    std::set<std::vector<int>> nags_words, oracle_words;
    for (const auto& path : extract_paths(result.nag, result.class_reps))
      nags_words.insert(h_signature(path_xy(world, path), scene.anchors).word);
    for (const auto& cls : oracle.classes) oracle_words.insert(cls.signature.word);
    CHECK(nags_words == oracle_words);
  }
}

TEST_CASE("start equals goal yields the trivial path") {
  AdjacencyGraph g(3);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  SearchConfig cfg;
  cfg.goal = GoalSpec::vertex(0);
  const SearchResult result = search_nag(g, 0, cfg);
  REQUIRE(result.class_reps.size() == 1);
  const auto paths = extract_paths(result.nag, result.class_reps);
  CHECK(paths[0] == std::vector<int>{0});
}

TEST_CASE("exhaustion reports the partial class count") {
  GridWorld world(4, 2, {});
  SearchConfig cfg;
  cfg.n_classes = 5;
  cfg.goal = GoalSpec::vertex(world.id(4, 1));
  const SearchResult result = search_nag(world.graph, world.id(0, 1), cfg);
  CHECK(result.exhausted);
  CHECK(result.class_reps.size() < 5);
  CHECK(result.class_reps.size() >= 1);
}

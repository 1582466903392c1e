#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "topoplan/topo_oracle.hpp"

using namespace topoplan;

namespace {

std::vector<Eigen::Vector2d> pts(std::initializer_list<std::pair<double, double>> l) {
  std::vector<Eigen::Vector2d> out;
  for (auto [x, y] : l) out.emplace_back(x, y);
  return out;
}

}  // namespace

TEST_CASE("straight path away from all rays has an empty word") {
  const auto sig = h_signature(pts({{-1, -1}, {1, -1}}), {{0.0, 0.0}});
  CHECK(sig.word.empty());
  CHECK(sig.str() == "()");
}

TEST_CASE("single crossing above the anchor is recorded with direction") {
  const auto fwd = h_signature(pts({{-1, 1}, {1, 1}}), {{0.0, 0.0}});
  CHECK(fwd.word == std::vector<int>{1});
  const auto bwd = h_signature(pts({{1, 1}, {-1, 1}}), {{0.0, 0.0}});
  CHECK(bwd.word == std::vector<int>{-1});
}

TEST_CASE("loop around one anchor leaves a double letter") {
  const auto loop = h_signature(
      pts({{-1, 1}, {1, 1}, {1, -1}, {-1, -1}, {-1, 1}, {1, 1}}), {{0.0, 0.0}});
  CHECK(loop.word == std::vector<int>{1, 1});
}

TEST_CASE("opposite sides of an obstacle produce different words") {
  const auto above = h_signature(pts({{-1, 0}, {0, 1}, {1, 0}}), {{0.0, 0.0}});
  const auto below = h_signature(pts({{-1, 0}, {0, -1}, {1, 0}}), {{0.0, 0.0}});
  CHECK_FALSE(above == below);
  CHECK(above.word == std::vector<int>{1});
  CHECK(below.word.empty());
}

TEST_CASE("back-and-forth crossings reduce away") {
  const auto sig = h_signature(
      pts({{-1, 1}, {1, 1}, {-0.5, 1.2}, {2, 1.4}}), {{0.0, 0.0}});
  CHECK(sig.word == std::vector<int>{1});
}

TEST_CASE("signature is invariant under refinement") {
  const auto base = pts({{-1, 1}, {1, 1}, {1, -2}, {-3, -2}});
  auto refined = pts({{-1, 1}, {0, 1}, {0.5, 1}, {1, 1}, {1, -0.5}, {1, -2},
                      {-1, -2}, {-3, -2}});
  const std::vector<Eigen::Vector2d> anchors = {{0.0, 0.0}, {-1.0, -3.0}};
  CHECK(h_signature(base, anchors) == h_signature(refined, anchors));
}

TEST_CASE("reversal inverts the word") {
  const auto path = pts({{-2, 1}, {0, 2}, {2, 1}, {2, -1}, {0, -2}});
  const std::vector<Eigen::Vector2d> anchors = {{0.0, 0.0}, {1.0, 0.5}};
  auto reversed = path;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(h_signature(reversed, anchors) == h_signature(path, anchors).inverse());
}

TEST_CASE("vertices sitting on a ray are nudged deterministically") {
  // Middle vertex exactly above the anchor.
  const auto sig = h_signature(pts({{-1, 1}, {0, 1}, {1, 1}}), {{0.0, 0.0}});
  CHECK(sig.word == std::vector<int>{1});
}

TEST_CASE("corridor graph enumerations") {
  // 5-vertex path graph: one class, no anchors.
  AdjacencyGraph line(5);
  std::vector<Eigen::Vector2d> xy;
  for (int i = 0; i < 5; ++i) {
    if (i) line.add_edge(i - 1, i, 1.0);
    xy.emplace_back(double(i), 0.0);
  }
  const auto classes = enumerate_classes(line, xy, 0, 4, {});
  REQUIRE(classes.classes.size() == 1);
  CHECK(classes.classes[0].path_count == 1);
  CHECK(classes.classes[0].best_cost == doctest::Approx(4.0));
}

TEST_CASE("ring around one pillar yields two classes") {
  // Square ring: 8 vertices around a central pillar at (1, 1).
  AdjacencyGraph ring(8);
  std::vector<Eigen::Vector2d> xy = {{0, 0}, {1, 0}, {2, 0}, {2, 1},
                                     {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  for (int i = 0; i < 8; ++i) ring.add_edge(i, (i + 1) % 8, 1.0);
  const auto classes = enumerate_classes(ring, xy, 0, 4, {{1.0, 1.0}});
  CHECK(classes.classes.size() == 2);
}

TEST_CASE("two pillars yield four classes on a wide corridor") {
  // 3-row corridor with two pillars; King connectivity.
  const int nx = 6, ny = 2;
  auto id = [&](int x, int y) { return y * (nx + 1) + x; };
  std::vector<char> blocked((nx + 1) * (ny + 1), 0);
  blocked[id(2, 1)] = 1;
  blocked[id(4, 1)] = 1;
  AdjacencyGraph g((nx + 1) * (ny + 1));
  std::vector<Eigen::Vector2d> xy;
  for (int y = 0; y <= ny; ++y)
    for (int x = 0; x <= nx; ++x) xy.emplace_back(x, y);
  for (int y = 0; y <= ny; ++y) {
    for (int x = 0; x <= nx; ++x) {
      if (blocked[id(x, y)]) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          const int ux = x + dx, uy = y + dy;
          if (ux < 0 || ux > nx || uy < 0 || uy > ny) continue;
          if (blocked[id(ux, uy)]) continue;
          if (id(ux, uy) > id(x, y))
            g.add_edge(id(x, y), id(ux, uy), std::sqrt(double(dx * dx + dy * dy)));
        }
      }
    }
  }
  const auto classes = enumerate_classes(g, xy, id(0, 1), id(6, 1),
                                         {{2.0, 1.0}, {4.0, 1.0}});
  CHECK(classes.classes.size() == 4);
}

TEST_CASE("vertex cap raises CapExceeded") {
  AdjacencyGraph big(100);
  std::vector<Eigen::Vector2d> xy(100, Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(enumerate_classes(big, xy, 0, 1, {}), CapExceeded);
}

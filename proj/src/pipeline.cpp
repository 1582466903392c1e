#include "topoplan/pipeline.hpp"

#include <chrono>
#include <future>
#include <limits>

namespace topoplan {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool passes_obs_check(const World& world, const RobotModel& robot,
                      const Trajectory& traj) {
  FullConfig q;
  for (int k = 0; k <= traj.T; ++k) {
    q.base = traj.base[k];
    q.heading = traj.heading[k];
    q.elbow = traj.elbow[k];
    q.ee = traj.ee[k];
    if (obs(world, robot, q)) return false;
  }
  return true;
}

}  // namespace

void PipelineConfig::validate() const {
  if (n < 1) throw std::invalid_argument("pipeline.n: must be >= 1");
  if (T < 2) throw std::invalid_argument("pipeline.T: must be >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("pipeline.dt: must be > 0");
  if (clearance_margin < 0.0)
    throw std::invalid_argument("pipeline.clearance_margin: must be >= 0");
  grid.validate();
}

int select_best(const std::vector<SolveStatus>& entries) {
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].converged) continue;
    if (entries[i].cost < best_cost) {
      best_cost = entries[i].cost;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw NoConvergedError("no converged solve to select from");
  return best;
}

PipelineOutcome find_path(const World& world, const RobotModel& robot,
                          const EePath& path, const PipelineConfig& cfg,
                          PipelineDebug* debug, bool seed_only) {
  cfg.validate();
  PipelineOutcome outcome;
  PipelineResult& result = outcome.result;
  result.timings.solve_s.assign(0, 0.0);

  // Stage 1: configuration graph.
  const auto t_graph = std::chrono::steady_clock::now();
  std::optional<ConfigGraph> graph;
  try {
    graph.emplace(build_graph(world, robot, path, cfg.grid, cfg.graph_options));
  } catch (const EmptyGraphError& e) {
    outcome.failure_reason = e.what();
    return outcome;
  }
  result.timings.graph_s = seconds_since(t_graph);

  const CgVertex start_cell = graph->quantize(cfg.start.x, cfg.start.y, 0.0, cfg.start.w);
  const int start_id = graph->find(start_cell);
  if (start_id < 0) {
    outcome.failure_reason = "start cell is not a vertex of the configuration graph";
    if (debug) debug->graph = std::move(graph);
    return outcome;
  }

  SearchConfig search_cfg;
  search_cfg.variant = cfg.variant;
  search_cfg.n_classes = cfg.n;
  search_cfg.distinct_goal_positions_are_distinct_classes =
      cfg.distinct_goal_positions_are_distinct_classes;
  // Safety cap: when fewer classes exist than requested, stop the search from
  // growing the NAG without bound.
  search_cfg.max_pops = 200LL * graph->vertex_count() + 1000;
  if (cfg.goal) {
    const CgVertex goal_cell =
        graph->quantize(cfg.goal->x, cfg.goal->y, 1.0, cfg.goal->w);
    const int goal_id = graph->find(goal_cell);
    if (goal_id < 0) {
      outcome.failure_reason = "goal cell is not a vertex of the configuration graph";
      if (debug) debug->graph = std::move(graph);
      return outcome;
    }
    search_cfg.goal = GoalSpec::vertex(goal_id);
  } else {
    std::vector<char> mask(graph->vertex_count(), 0);
    const int nt = cfg.grid.t_steps();
    for (int id = 0; id < graph->vertex_count(); ++id)
      mask[id] = graph->vertex(id).it == nt ? 1 : 0;
    search_cfg.goal = GoalSpec::any_of(std::move(mask));
  }

  // Stage 2: homotopically distinct guesses.
  const auto t_nags = std::chrono::steady_clock::now();
  SearchResult search;
  std::vector<GuessPath> guesses =
      modified_nags(*graph, robot, path, start_id, search_cfg, &search);
  result.timings.nags_s = seconds_since(t_nags);
  result.classes_found = static_cast<int>(guesses.size());
  if (debug) {
    debug->search = search;
    debug->graph = std::move(graph);
  }
  if (guesses.empty()) {
    outcome.failure_reason = "graph search found no path to the goal set";
    return outcome;
  }
  if (result.classes_found < cfg.n) {
    result.warnings.push_back("requested " + std::to_string(cfg.n) +
                              " classes, found " +
                              std::to_string(result.classes_found));
  }

  // Stage 3: seed and locally optimize each guess (parallel work items).
  const TrajOptProblem problem(world, robot, path, cfg.T, cfg.dt,
                               cfg.clearance_margin);
  result.records.resize(guesses.size());
  result.timings.solve_s.assign(guesses.size(), 0.0);
  for (std::size_t i = 0; i < guesses.size(); ++i) {
    result.records[i].guess = std::move(guesses[i]);
    // Graph paths may retreat along t; seeding needs a nondecreasing sequence.
    GuessPath monotone = result.records[i].guess;
    for (std::size_t j = 1; j < monotone.t.size(); ++j)
      monotone.t[j] = std::max(monotone.t[j], monotone.t[j - 1]);
    result.records[i].seed = seed_from_guess(monotone, robot, path, cfg.T, cfg.dt);
  }
  if (seed_only) {
    for (auto& record : result.records) {
      record.trajectory = record.seed;
      record.report.cost = evaluate_cost(record.seed);
      record.report.converged = false;
      record.report.message = "seed only";
    }
    outcome.success = true;
    return outcome;
  }

  std::vector<std::future<std::pair<SolveOutcome, double>>> futures;
  futures.reserve(result.records.size());
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      const auto t_solve = std::chrono::steady_clock::now();
      SolveOutcome solved = solve(problem, result.records[i].seed, cfg.solve);
      return std::make_pair(std::move(solved), seconds_since(t_solve));
    }));
  }
  for (std::size_t i = 0; i < futures.size(); ++i) {
    auto [solved, elapsed] = futures[i].get();
    GuessRecord& record = result.records[i];
    record.report = solved.report;
    record.trajectory = std::move(solved.trajectory);
    result.timings.solve_s[i] = elapsed;
    record.solve_ok = record.report.converged;
    if (record.solve_ok && !passes_obs_check(world, robot, record.trajectory)) {
      record.solve_ok = false;
      result.warnings.push_back("guess " + std::to_string(i) +
                                " converged but failed the collision re-check");
    } else if (!record.report.converged) {
      result.warnings.push_back("guess " + std::to_string(i) +
                                " failed to converge: " + record.report.message);
    }
  }

  // Stage 4: pick the cheapest local optimum.
  std::vector<SolveStatus> statuses;
  statuses.reserve(result.records.size());
  for (const GuessRecord& record : result.records)
    statuses.push_back({record.report.cost, record.solve_ok});
  try {
    result.best_index = select_best(statuses);
  } catch (const NoConvergedError&) {
    outcome.failure_reason = "all trajectory optimizations failed";
    return outcome;
  }
  outcome.success = true;
  return outcome;
}

}  // namespace topoplan

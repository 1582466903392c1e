#include "topoplan/cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "topoplan/scene_io.hpp"
#include "topoplan/svg.hpp"

namespace topoplan {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-locally optimal path planning for a mobile manipulator "
               "tracking an end effector path"};
  std::string scene_path, out_dir;
  int n_override = -1;
  std::string variant_override;
  bool want_graph_dump = false, want_nag_dump = false, seed_only = false,
       fixed_timings = false;
  app.add_option("--scene", scene_path, "Scene JSON file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--n", n_override, "Override the number of classes");
  app.add_option("--variant", variant_override,
                 "Override the search variant: modified|generalized");
  app.add_flag("--dump-graph", want_graph_dump, "Write the configuration graph dump");
  app.add_flag("--dump-nag", want_nag_dump, "Write the NAG dump");
  app.add_flag("--seed-only", seed_only, "Emit initial guesses without solving");
  app.add_flag("--fixed-timings", fixed_timings,
               "Record zero stage timings (for byte-identical outputs)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  Scene scene{RobotModel{}, World{}, EePath({0.0, 1.0}, {{0, 0, 0}, {1, 0, 0}}),
              PipelineConfig{}};
  try {
    scene = load_scene_file(scene_path);
    if (n_override > 0) scene.pipeline.n = n_override;
    if (!variant_override.empty()) {
      if (variant_override == "modified")
        scene.pipeline.variant = NagsVariant::kModified;
      else if (variant_override == "generalized")
        scene.pipeline.variant = NagsVariant::kGeneralized;
      else
        throw SceneError("--variant: must be modified or generalized");
    }
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  PipelineDebug debug;
  PipelineOutcome outcome;
  try {
    outcome = find_path(scene.world, scene.robot, scene.path, scene.pipeline,
                        (want_graph_dump || want_nag_dump) ? &debug : nullptr,
                        seed_only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const std::string& warning : outcome.result.warnings)
    std::cerr << "warning: " << warning << "\n";
  if (!outcome.success)
    std::cerr << "pipeline failure: " << outcome.failure_reason << "\n";

  try {
    write_file(out_dir + "/result.json",
               result_to_json(outcome.result, fixed_timings));
    for (std::size_t i = 0; i < outcome.result.records.size(); ++i) {
      write_file(out_dir + "/traj_" + std::to_string(i) + ".json",
                 trajectory_to_json(outcome.result.records[i].trajectory));
    }
    plot_svg(outcome.result, scene.world, scene.path, out_dir);
    if (want_graph_dump && debug.graph)
      write_file(out_dir + "/graph.json", debug.graph->dump());
    if (want_nag_dump && debug.search)
      write_file(out_dir + "/nag.json", dump_nag(debug.search->nag));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return outcome.success ? 0 : 2;
}

}  // namespace topoplan

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "roomforge/commands.hpp"
#include "roomforge/run_config.hpp"

namespace {

using roomforge::RunConfig;

// "200:400,400:600" -> [(200,400), (400,600)].
std::vector<std::pair<double, double>> parse_intervals(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--intervals", "expected lo:hi pairs, got '" +
                                                    item + "'");
    }
    try {
      out.emplace_back(std::stod(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--intervals",
                                 "non-numeric bound in '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// m equal slices of the discrete range [0, 1000].
std::vector<std::pair<double, double>> even_intervals(int m) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < m; ++i) {
    out.emplace_back(1000.0 * i / m, 1000.0 * (i + 1) / m);
  }
  return out;
}

// Shared flags; later sources win (defaults < --config < explicit flags).
struct Cli {
  RunConfig config;
  std::string config_path;
  std::string intervals_text;
  int m = 0;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "load a config.json emitted by an earlier run");
    cmd->add_option("--seed", config.seed, "deterministic run seed")
        ->envname("ROOMFORGE_SEED");
    cmd->add_option("--cell-size", config.cell_size,
                    "occupancy grid cell size in meters");
    cmd->add_option("--budget-iters", config.budget_iters,
                    "collision repair iteration budget");
    cmd->add_option("--out", config.out_dir, "output directory");
  }

  // Re-parses layered sources into the final effective config.
  RunConfig effective(CLI::App* cmd) {
    RunConfig merged;
    if (!config_path.empty()) merged = roomforge::load_run_config(config_path);
    const auto given = [&](const char* flag) {
      const CLI::Option* opt = cmd->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    const auto keep = [&](const char* flag, auto member) {
      if (given(flag)) merged.*member = config.*member;
    };
    keep("--seed", &RunConfig::seed);
    keep("--cell-size", &RunConfig::cell_size);
    keep("--budget-iters", &RunConfig::budget_iters);
    keep("--mode", &RunConfig::mode);
    keep("--target", &RunConfig::target);
    keep("--eye-height", &RunConfig::eye_height);
    keep("--samples", &RunConfig::samples);
    keep("--steps", &RunConfig::descend_steps);
    keep("--lr", &RunConfig::learning_rate);
    if (given("--intervals")) {
      merged.intervals = parse_intervals(intervals_text);
    } else if (given("--m")) {
      merged.intervals = even_intervals(m);
    }
    merged.out_dir = config.out_dir;
    return merged;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "roomforge: constraint-driven room layouts, camera paths, and "
      "flow-distillation checks"};
  app.require_subcommand(1);

  Cli arrange_cli, cameras_cli, edit_cli, check_cli;
  std::string scene_path, layout_path, edit_path;

  CLI::App* arrange =
      app.add_subcommand("arrange", "place a scene's objects into a layout");
  arrange->add_option("scene", scene_path, "scene JSON file")->required();
  arrange_cli.add_common(arrange);

  CLI::App* cameras =
      app.add_subcommand("cameras", "plan a camera trajectory over a layout");
  cameras->add_option("layout", layout_path, "layout.json from arrange")
      ->required();
  cameras_cli.add_common(cameras);
  cameras
      ->add_option("--mode", cameras_cli.config.mode,
                   "trajectory style: zoom_out, zoom_in, or hybrid")
      ->check(CLI::IsMember({"zoom_out", "zoom_in", "hybrid"}));
  cameras->add_option("--target", cameras_cli.config.target,
                      "zoom-in target instance (default: every floor object)");
  cameras->add_option("--eye-height", cameras_cli.config.eye_height,
                      "walking camera height in meters");

  CLI::App* edit =
      app.add_subcommand("edit", "apply insert/delete/reposition edits");
  edit->add_option("layout", layout_path, "layout.json to edit")->required();
  edit->add_option("edits", edit_path, "edit spec JSON (one op or an array)")
      ->required();
  edit_cli.add_common(edit);

  CLI::App* check = app.add_subcommand(
      "itfs-check", "run the distillation estimator acceptance battery");
  check_cli.add_common(check);
  check->add_option("--m", check_cli.m,
                    "split [0,1000] into m equal sampling intervals")
      ->check(CLI::PositiveNumber);
  check->add_option("--intervals", check_cli.intervals_text,
                    "explicit intervals as lo:hi,lo:hi,...");
  check->add_option("--samples", check_cli.config.samples,
                    "draws per estimator check");
  check->add_option("--steps", check_cli.config.descend_steps,
                    "descend steps for the convergence check");
  check->add_option("--lr", check_cli.config.learning_rate,
                    "descend learning rate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (arrange->parsed()) {
      return roomforge::cmd_arrange(scene_path, arrange_cli.effective(arrange),
                                    std::cout);
    }
    if (cameras->parsed()) {
      return roomforge::cmd_cameras(layout_path, cameras_cli.effective(cameras),
                                    std::cout);
    }
    if (edit->parsed()) {
      return roomforge::cmd_edit(layout_path, edit_path,
                                 edit_cli.effective(edit), std::cout);
    }
    return roomforge::cmd_itfs_check(check_cli.effective(check), std::cout);
  } catch (const std::exception& e) {
    // Config loading/merging problems surface before a command runs.
    std::cout << "error: " << e.what() << "\n";
    return roomforge::kExitParseError;
  }
}

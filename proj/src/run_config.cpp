#include "roomforge/run_config.hpp"

#include <stdexcept>
#include <string>

#include "roomforge/scene_io.hpp"

namespace roomforge {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("run config: ") + what);
}

Json pairs_to_json(const std::vector<std::pair<double, double>>& pairs) {
  Json out = Json::array();
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

std::vector<std::pair<double, double>> pairs_from_json(const Json& j,
                                                       const char* what) {
  std::vector<std::pair<double, double>> out;
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("run config: ") + what +
                                " must be an array of [a, b] pairs");
  }
  for (const Json& entry : j) {
    if (!entry.is_array() || entry.size() != 2) {
      throw std::invalid_argument(std::string("run config: ") + what +
                                  " entries must be [a, b] pairs");
    }
    out.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  require(cell_size > 0.0 && cell_size <= 1.0, "cell_size outside (0, 1]");
  require(agent_half_width >= 0.0 && agent_half_width <= 2.0,
          "agent_half_width outside [0, 2]");
  require(walk_under_height > 0.0 && walk_under_height <= 10.0,
          "walk_under_height outside (0, 10]");
  require(budget_iters >= 1 && budget_iters <= 100000,
          "budget_iters outside [1, 100000]");
  require(lattice > 0.0 && lattice <= 1.0, "lattice outside (0, 1]");
  require(wall_mount_base >= 0.0 && wall_mount_base <= 10.0,
          "wall_mount_base outside [0, 10]");
  require(beside_gap >= 0.0 && beside_gap <= 10.0,
          "beside_gap outside [0, 10]");
  require(reach_radius > 0.0 && reach_radius <= 10.0,
          "reach_radius outside (0, 10]");
  require(mode == "zoom_out" || mode == "zoom_in" || mode == "hybrid",
          "mode must be zoom_out, zoom_in, or hybrid");
  require(turns >= 1 && turns <= 100, "turns outside [1, 100]");
  require(poses_per_turn >= 1 && poses_per_turn <= 10000,
          "poses_per_turn outside [1, 10000]");
  require(transfer_poses >= 2 && transfer_poses <= 10000,
          "transfer_poses outside [2, 10000]");
  require(eye_height > 0.0 && eye_height <= 5.0,
          "eye_height outside (0, 5]");
  require(radius_min > 0.0 && radius_min <= radius_max,
          "radius_min outside (0, radius_max]");
  require(radius_max <= 100.0, "radius_max above 100");
  require(fovy_min >= 1.0 && fovy_min <= fovy_max,
          "fovy_min outside [1, fovy_max]");
  require(fovy_max <= 179.0, "fovy_max above 179");
  require(samples >= 1 && samples <= 1000000,
          "samples outside [1, 1000000]");
  require(descend_steps >= 1 && descend_steps <= 1000000,
          "descend_steps outside [1, 1000000]");
  require(learning_rate > 0.0 && learning_rate < 10.0,
          "learning_rate outside (0, 10)");
}

Json run_config_to_json(const RunConfig& config) {
  Json j;
  j["seed"] = config.seed;
  j["cell_size"] = config.cell_size;
  j["agent_half_width"] = config.agent_half_width;
  j["walk_under_height"] = config.walk_under_height;
  j["budget_iters"] = config.budget_iters;
  j["lattice"] = config.lattice;
  j["wall_mount_base"] = config.wall_mount_base;
  j["beside_gap"] = config.beside_gap;
  j["reach_radius"] = config.reach_radius;
  j["mode"] = config.mode;
  j["target"] = config.target;
  j["turns"] = config.turns;
  j["poses_per_turn"] = config.poses_per_turn;
  j["transfer_poses"] = config.transfer_poses;
  j["eye_height"] = config.eye_height;
  j["radius_min"] = config.radius_min;
  j["radius_max"] = config.radius_max;
  j["fovy_min"] = config.fovy_min;
  j["fovy_max"] = config.fovy_max;
  j["samples"] = config.samples;
  j["descend_steps"] = config.descend_steps;
  j["learning_rate"] = config.learning_rate;
  j["intervals"] = pairs_to_json(config.intervals);
  j["weight_knots"] = pairs_to_json(config.weight_knots);
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig config;
  if (!j.is_object()) {
    throw std::invalid_argument("run config: document must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "cell_size") {
      config.cell_size = value.get<double>();
    } else if (key == "agent_half_width") {
      config.agent_half_width = value.get<double>();
    } else if (key == "walk_under_height") {
      config.walk_under_height = value.get<double>();
    } else if (key == "budget_iters") {
      config.budget_iters = value.get<int>();
    } else if (key == "lattice") {
      config.lattice = value.get<double>();
    } else if (key == "wall_mount_base") {
      config.wall_mount_base = value.get<double>();
    } else if (key == "beside_gap") {
      config.beside_gap = value.get<double>();
    } else if (key == "reach_radius") {
      config.reach_radius = value.get<double>();
    } else if (key == "mode") {
      config.mode = value.get<std::string>();
    } else if (key == "target") {
      config.target = value.get<std::string>();
    } else if (key == "turns") {
      config.turns = value.get<int>();
    } else if (key == "poses_per_turn") {
      config.poses_per_turn = value.get<int>();
    } else if (key == "transfer_poses") {
      config.transfer_poses = value.get<int>();
    } else if (key == "eye_height") {
      config.eye_height = value.get<double>();
    } else if (key == "radius_min") {
      config.radius_min = value.get<double>();
    } else if (key == "radius_max") {
      config.radius_max = value.get<double>();
    } else if (key == "fovy_min") {
      config.fovy_min = value.get<double>();
    } else if (key == "fovy_max") {
      config.fovy_max = value.get<double>();
    } else if (key == "samples") {
      config.samples = value.get<int>();
    } else if (key == "descend_steps") {
      config.descend_steps = value.get<int>();
    } else if (key == "learning_rate") {
      config.learning_rate = value.get<double>();
    } else if (key == "intervals") {
      config.intervals = pairs_from_json(value, "intervals");
    } else if (key == "weight_knots") {
      config.weight_knots = pairs_from_json(value, "weight_knots");
    } else {
      throw std::invalid_argument("run config: unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(parse_json_text(read_text_file(path)));
}

void save_run_config(const std::string& path, const RunConfig& config) {
  write_text_file(path, run_config_to_json(config).dump(2) + "\n");
}

}  // namespace roomforge

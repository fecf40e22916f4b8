// Python bindings for the native core. Scene and layout operations speak
// JSON text (the same documents the CLI reads and writes); the
// distillation toys speak numpy arrays through Eigen. The pure-Python
// wrappers in roomforge/__init__.py add dict-level convenience on top.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roomforge/arranger.hpp"
#include "roomforge/camera.hpp"
#include "roomforge/commands.hpp"
#include "roomforge/distill.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/run_config.hpp"
#include "roomforge/scene_io.hpp"
#include "roomforge/svg.hpp"

namespace py = pybind11;
using namespace roomforge;

namespace {

constexpr int kDumpIndent = 2;

SceneLayout layout_from_text(const std::string& layout_json) {
  return layout_from_json(parse_json_text(layout_json));
}

ArrangeOptions make_arrange_options(std::uint64_t seed, int budget_iters,
                                    double cell_size) {
  ArrangeOptions options;
  options.seed = seed;
  options.budget_iters = budget_iters;
  options.nav.cell_size = cell_size;
  return options;
}

RenderParam make_param(const Vecd& theta, const std::optional<Matd>& render) {
  if (!render) {
    return {theta, RenderMap::identity(static_cast<int>(theta.size()))};
  }
  return {theta, RenderMap::matrix(*render)};
}

WeightFn make_weight(const std::vector<std::pair<double, double>>& knots) {
  return knots.empty() ? WeightFn::constant() : WeightFn::table(knots);
}

IntervalSchedule make_schedule(
    const std::vector<std::pair<double, double>>& intervals,
    const std::vector<std::pair<double, double>>& weight_knots) {
  IntervalSchedule schedule = coarse_to_fine_schedule();
  if (!intervals.empty()) schedule.intervals = intervals;
  schedule.weight = make_weight(weight_knots);
  schedule.validate();
  return schedule;
}

OrientedBox make_box(const std::array<double, 3>& center,
                     const std::array<double, 3>& half_extents, double yaw) {
  return OrientedBox::make({center[0], center[1], center[2]},
                           {half_extents[0], half_extents[1], half_extents[2]},
                           yaw);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core: layout arrangement, camera planning, and "
            "flow-distillation numerics.";

  py::register_exception<EditRejected>(m, "EditRejected");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SceneError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NoPath& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DimMismatch& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    }
  });

  // -------------------------------------------------------------------------
  // Scene and layout operations (JSON text in, JSON text out)

  m.def(
      "arrange",
      [](const std::string& scene_json, std::uint64_t seed, int budget_iters,
         double cell_size) {
        const Json doc = parse_json_text(scene_json);
        const SceneDescription scene = scene_from_json(doc);
        std::vector<PlacementRule> rules;
        if (doc.is_object() && doc.contains("rules")) {
          rules = rules_from_json(doc.at("rules"));
        }
        const SceneLayout layout =
            arrange(scene, rules, make_arrange_options(seed, budget_iters,
                                                       cell_size));
        return layout_to_json(layout).dump(kDumpIndent) + "\n";
      },
      py::arg("scene_json"), py::arg("seed") = 0,
      py::arg("budget_iters") = 200, py::arg("cell_size") = 0.1,
      "Arrange a scene description (with optional rules) into a layout; "
      "returns the layout document as JSON text.");

  m.def(
      "plan_cameras",
      [](const std::string& layout_json, const std::string& mode,
         std::uint64_t seed, const std::string& target, double eye_height,
         double cell_size) {
        RunConfig config;
        config.mode = mode;
        config.seed = seed;
        config.target = target;
        config.eye_height = eye_height;
        config.cell_size = cell_size;
        config.validate();
        const SceneLayout layout = layout_from_text(layout_json);
        const Trajectory trajectory = plan_trajectory(layout, config);
        return trajectory_to_json(trajectory).dump(kDumpIndent) + "\n";
      },
      py::arg("layout_json"), py::arg("mode") = "hybrid", py::arg("seed") = 0,
      py::arg("target") = "", py::arg("eye_height") = 1.6,
      py::arg("cell_size") = 0.1,
      "Plan a camera trajectory over a collision-free layout; returns "
      "{mode, poses} as JSON text.");

  m.def(
      "apply_edit",
      [](const std::string& layout_json, const std::string& edit_json,
         std::uint64_t seed, int budget_iters, double cell_size) {
        SceneLayout layout = layout_from_text(layout_json);
        const Json doc = parse_json_text(edit_json);
        const ArrangeOptions options =
            make_arrange_options(seed, budget_iters, cell_size);
        if (doc.is_array()) {
          for (const Json& edit : doc) apply_edit(layout, edit, options);
        } else {
          apply_edit(layout, doc, options);
        }
        return layout_to_json(layout).dump(kDumpIndent) + "\n";
      },
      py::arg("layout_json"), py::arg("edit_json"), py::arg("seed") = 0,
      py::arg("budget_iters") = 200, py::arg("cell_size") = 0.1,
      "Apply one edit op (or an array of ops) to a layout; raises "
      "EditRejected when the change would break it.");

  m.def(
      "collision_reward",
      [](const std::string& layout_json) {
        return collision_reward(layout_from_text(layout_json));
      },
      py::arg("layout_json"),
      "Collision reward of a layout document: 0.0 exactly when nothing "
      "overlaps, negative otherwise.");

  m.def(
      "reach_report",
      [](const std::string& layout_json, double cell_size) {
        NavOptions nav;
        nav.cell_size = cell_size;
        const ReachReport reach =
            reach_diagnostic(layout_from_text(layout_json), nav);
        Json j;
        j["has_spawn"] = reach.has_spawn;
        j["considered"] = reach.considered;
        j["reachable"] = reach.reachable_count;
        j["unreachable"] = reach.unreachable;
        return j.dump(kDumpIndent) + "\n";
      },
      py::arg("layout_json"), py::arg("cell_size") = 0.1,
      "Walkability report for a layout's top-level objects as JSON text.");

  m.def(
      "floorplan_svg",
      [](const std::string& layout_json) {
        return floorplan_svg(layout_from_text(layout_json));
      },
      py::arg("layout_json"),
      "Top-down SVG rendering of a layout document.");

  m.def(
      "iou3d",
      [](const std::array<double, 3>& center_a,
         const std::array<double, 3>& half_extents_a, double yaw_a,
         const std::array<double, 3>& center_b,
         const std::array<double, 3>& half_extents_b, double yaw_b) {
        return iou3d(make_box(center_a, half_extents_a, yaw_a),
                     make_box(center_b, half_extents_b, yaw_b));
      },
      py::arg("center_a"), py::arg("half_extents_a"), py::arg("yaw_a"),
      py::arg("center_b"), py::arg("half_extents_b"), py::arg("yaw_b"),
      "IoU of two yaw-rotated boxes given centers and half extents.");

  // -------------------------------------------------------------------------
  // Distillation numerics (numpy arrays via Eigen)

  py::class_<VelocityOracle>(m, "VelocityOracle",
                             "Analytic stand-in for a guidance network.")
      .def_static("teacher", &VelocityOracle::teacher,
                  "Predicts eps - x0 exactly (flow convention).")
      .def_static("noise_teacher", &VelocityOracle::noise_teacher,
                  "Predicts eps exactly (noise convention).")
      .def_static("exact", &VelocityOracle::exact, py::arg("target"),
                  "Closed-form field whose flow carries every point to "
                  "target.")
      .def_static("linear", &VelocityOracle::linear, py::arg("a"),
                  py::arg("b"), "A x + b.")
      .def_static("zero", &VelocityOracle::zero, py::arg("dim"),
                  "Always returns the zero field.")
      .def("biased", &VelocityOracle::biased, py::arg("bias"),
           "Copy of this oracle with a constant bias added to every "
           "output.");

  m.def("coarse_to_fine_intervals",
        [] { return coarse_to_fine_schedule().intervals; },
        "The default interval schedule: [200,400], [400,600], [600,800] "
        "discrete timesteps.");

  m.def(
      "cfm_loss",
      [](const VelocityOracle& oracle, const Vecd& x0, int samples,
         std::uint64_t seed, double t_lo, double t_hi,
         const std::vector<std::pair<double, double>>& weight_knots) {
        return cfm_loss(oracle, x0, samples, seed, make_weight(weight_knots),
                        TimeDist{t_lo, t_hi});
      },
      py::arg("oracle"), py::arg("x0"), py::arg("samples") = 64,
      py::arg("seed") = 0, py::arg("t_lo") = 0.0, py::arg("t_hi") = 1.0,
      py::arg("weight_knots") = std::vector<std::pair<double, double>>{},
      "Monte-Carlo flow-matching loss of the oracle around x0.");

  m.def(
      "sds_grad",
      [](const VelocityOracle& noise_oracle, const Vecd& theta,
         const std::optional<Matd>& render, double t_lo, double t_hi,
         int samples, std::uint64_t seed,
         const std::vector<std::pair<double, double>>& weight_knots) {
        return sds_grad(noise_oracle, make_param(theta, render), 0,
                        TimeDist{t_lo, t_hi}, samples, seed,
                        make_weight(weight_knots));
      },
      py::arg("noise_oracle"), py::arg("theta"), py::arg("render") = py::none(),
      py::arg("t_lo") = 0.0, py::arg("t_hi") = 1.0, py::arg("samples") = 64,
      py::arg("seed") = 0,
      py::arg("weight_knots") = std::vector<std::pair<double, double>>{},
      "Noise-convention distillation gradient over theta. render is an "
      "optional Jacobian matrix; identity when omitted.");

  m.def(
      "fds_grad",
      [](const VelocityOracle& oracle, const Vecd& theta,
         const std::optional<Matd>& render, double t_lo, double t_hi,
         int samples, std::uint64_t seed,
         const std::vector<std::pair<double, double>>& weight_knots) {
        return fds_grad(oracle, make_param(theta, render), 0,
                        TimeDist{t_lo, t_hi}, samples, seed,
                        make_weight(weight_knots));
      },
      py::arg("oracle"), py::arg("theta"), py::arg("render") = py::none(),
      py::arg("t_lo") = 0.0, py::arg("t_hi") = 1.0, py::arg("samples") = 64,
      py::arg("seed") = 0,
      py::arg("weight_knots") = std::vector<std::pair<double, double>>{},
      "Flow-convention distillation gradient over theta.");

  m.def(
      "itfs_grad",
      [](const VelocityOracle& oracle, const Vecd& theta,
         const std::optional<Matd>& render,
         const std::vector<std::pair<double, double>>& intervals, int samples,
         std::uint64_t seed,
         const std::vector<std::pair<double, double>>& weight_knots) {
        return itfs_grad(oracle, make_param(theta, render), 0,
                         make_schedule(intervals, weight_knots), samples,
                         seed);
      },
      py::arg("oracle"), py::arg("theta"), py::arg("render") = py::none(),
      py::arg("intervals") = std::vector<std::pair<double, double>>{},
      py::arg("samples") = 64, py::arg("seed") = 0,
      py::arg("weight_knots") = std::vector<std::pair<double, double>>{},
      "Interval-timestep distillation gradient. intervals are discrete "
      "timestep pairs in [0, 1000]; empty uses the coarse-to-fine "
      "default.");

  m.def(
      "descend_trace",
      [](const VelocityOracle& oracle, const Vecd& theta0, const Vecd& target,
         int steps, double lr, double t_lo, double t_hi, int samples,
         std::uint64_t seed) {
        RenderParam rp = make_param(theta0, std::nullopt);
        const auto grad_fn = [&](const RenderParam& p) {
          return fds_grad(oracle, p, 0, TimeDist{t_lo, t_hi}, samples, seed);
        };
        const DescendResult result = descend(rp, grad_fn, steps, lr, &target);
        return py::make_tuple(result.rp.theta, result.trace, result.diverged);
      },
      py::arg("oracle"), py::arg("theta0"), py::arg("target"),
      py::arg("steps") = 200, py::arg("lr") = 0.1, py::arg("t_lo") = 1.0,
      py::arg("t_hi") = 1.0, py::arg("samples") = 8, py::arg("seed") = 0,
      "Gradient descent on theta under the flow-convention gradient with "
      "an identity render. Returns (theta, distance_trace, diverged).");
}

#include "roomforge/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "roomforge/geometry.hpp"
#include "roomforge/scene.hpp"

namespace roomforge {
namespace {

struct Frame {
  double min_x = 0.0;
  double max_y = 0.0;
  double scale = 100.0;
  double margin = 0.5;
  double width_px = 0.0;
  double height_px = 0.0;

  double px(double x) const { return (x - min_x + margin) * scale; }
  double py(double y) const { return (max_y + margin - y) * scale; }
};

Frame make_frame(const SceneDescription& scene, const SvgOptions& options) {
  Frame f;
  f.scale = options.px_per_meter;
  f.margin = options.margin_m;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x, max_x = -min_x, max_y = -min_x;
  for (const Room& room : scene.rooms) {
    for (const Vec2& c : room.corners) {
      min_x = std::min(min_x, c.x);
      min_y = std::min(min_y, c.y);
      max_x = std::max(max_x, c.x);
      max_y = std::max(max_y, c.y);
    }
  }
  if (scene.rooms.empty()) min_x = min_y = max_x = max_y = 0.0;
  f.min_x = min_x;
  f.max_y = max_y;
  f.width_px = (max_x - min_x + 2.0 * f.margin) * f.scale;
  f.height_px = (max_y - min_y + 2.0 * f.margin) * f.scale;
  return f;
}

// Two-decimal fixed formatting keeps the files byte-stable across runs.
std::string num(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  std::string text = s.str();
  if (text == "-0.00") text = "0.00";
  return text;
}

void line(std::ostringstream& out, const Frame& f, Vec2 a, Vec2 b,
          const char* color, double width_px,
          const char* cap = "butt") {
  out << "  <line x1=\"" << num(f.px(a.x)) << "\" y1=\"" << num(f.py(a.y))
      << "\" x2=\"" << num(f.px(b.x)) << "\" y2=\"" << num(f.py(b.y))
      << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width_px)
      << "\" stroke-linecap=\"" << cap << "\"/>\n";
}

void wall_segment_line(std::ostringstream& out, const Frame& f,
                       const WallSegment& seg, const char* color,
                       double width_px, const char* cap = "butt") {
  const Vec2 a = seg.vertical ? Vec2{seg.coord, seg.lo} : Vec2{seg.lo, seg.coord};
  const Vec2 b = seg.vertical ? Vec2{seg.coord, seg.hi} : Vec2{seg.hi, seg.coord};
  line(out, f, a, b, color, width_px, cap);
}

void polygon(std::ostringstream& out, const Frame& f,
             const std::vector<Vec2>& pts, const char* fill,
             const char* stroke, double stroke_px) {
  out << "  <polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << ' ';
    out << num(f.px(pts[i].x)) << ',' << num(f.py(pts[i].y));
  }
  out << "\" fill=\"" << fill << "\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(stroke_px) << "\"/>\n";
}

void draw_rooms(std::ostringstream& out, const Frame& f,
                const SceneDescription& scene) {
  for (const Room& room : scene.rooms) {
    std::vector<Vec2> pts(room.corners.begin(), room.corners.end());
    polygon(out, f, pts, "#f7f3ea", "none", 0.0);
  }
}

void draw_walls(std::ostringstream& out, const Frame& f,
                const SceneDescription& scene) {
  for (const Room& room : scene.rooms) {
    const Rect r = room.rect();
    const Vec2 a{r.x0, r.y0}, b{r.x1, r.y0};
    const Vec2 c{r.x1, r.y1}, d{r.x0, r.y1};
    line(out, f, a, b, "#3d3a34", 5.0, "square");
    line(out, f, b, c, "#3d3a34", 5.0, "square");
    line(out, f, c, d, "#3d3a34", 5.0, "square");
    line(out, f, d, a, "#3d3a34", 5.0, "square");
  }
}

void draw_windows(std::ostringstream& out, const Frame& f,
                  const SceneDescription& scene) {
  for (const WindowSpec& win : scene.windows) {
    const Room* room = scene.find_room(win.room);
    if (!room) continue;
    const WallSegment wall = room_wall(*room, win.wall_direction);
    const double w = win.width_cm / 100.0;
    const int q = std::max(1, win.quantity);
    for (int i = 0; i < q; ++i) {
      // Evenly spaced slots along the wall, one window centered per slot.
      const double center = wall.lo + (i + 0.5) / q * wall.length();
      WallSegment seg = wall;
      seg.lo = std::max(wall.lo, center - w / 2.0);
      seg.hi = std::min(wall.hi, center + w / 2.0);
      if (seg.hi <= seg.lo) continue;
      wall_segment_line(out, f, seg, "#7aa7d6", 7.0);
      wall_segment_line(out, f, seg, "#ffffff", 2.0);
    }
  }
}

void draw_doors(std::ostringstream& out, const Frame& f,
                const SceneDescription& scene) {
  for (const DoorSpan& door : door_spans(scene)) {
    wall_segment_line(out, f, door.span, "#ffffff", 7.0);
    if (door.kind == ConnectionKind::Doorframe) {
      wall_segment_line(out, f, door.span, "#b5651d", 2.0);
    }
  }
}

void draw_objects(std::ostringstream& out, const Frame& f,
                  const SceneLayout& layout) {
  for (const PlacedObject& object : layout.placed) {
    const ConvexPolygon2D fp = footprint(object.box());
    const bool child = !object.parent.empty();
    const char* fill = child                        ? "#f2c4b8"
                       : object.mount == Mount::Wall ? "#c7d9f2"
                                                     : "#dccba5";
    const char* stroke = child                        ? "#a8654f"
                         : object.mount == Mount::Wall ? "#4a6fa5"
                                                       : "#8a7148";
    polygon(out, f, fp.vertices, fill, stroke, 1.5);
    // Facing tick: front of the footprint is (sin yaw, -cos yaw).
    const Vec2 front{std::sin(object.yaw), -std::cos(object.yaw)};
    const double len =
        0.6 * std::min(object.size.x, object.size.z) / 2.0;
    const Vec2 center = object.position;
    line(out, f, center,
         {center.x + front.x * len, center.y + front.y * len}, stroke, 2.0,
         "round");
    if (!child) {
      out << "  <text x=\"" << num(f.px(center.x)) << "\" y=\""
          << num(f.py(center.y) - 6.0)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" "
             "text-anchor=\"middle\">"
          << object.name << "</text>\n";
    }
  }
}

std::string render(const SceneLayout& layout, const Trajectory* trajectory,
                   const SvgOptions& options) {
  const Frame f = make_frame(layout.scene, options);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << num(f.width_px) << "\" height=\"" << num(f.height_px)
      << "\" viewBox=\"0 0 " << num(f.width_px) << ' ' << num(f.height_px)
      << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  draw_rooms(out, f, layout.scene);
  draw_walls(out, f, layout.scene);
  draw_windows(out, f, layout.scene);
  draw_doors(out, f, layout.scene);
  draw_objects(out, f, layout);
  if (trajectory && !trajectory->poses.empty()) {
    out << "  <polyline points=\"";
    for (std::size_t i = 0; i < trajectory->poses.size(); ++i) {
      const Vec3& p = trajectory->poses[i].position;
      if (i) out << ' ';
      out << num(f.px(p.x)) << ',' << num(f.py(p.y));
    }
    out << "\" fill=\"none\" stroke=\"#9bb8d4\" stroke-width=\"1.50\"/>\n";
    for (const CameraPose& pose : trajectory->poses) {
      const char* color =
          pose.phase == "zoom_in" ? "#d95f4a" : "#4a90d9";
      out << "  <circle cx=\"" << num(f.px(pose.position.x)) << "\" cy=\""
          << num(f.py(pose.position.y)) << "\" r=\"2.50\" fill=\"" << color
          << "\"/>\n";
    }
    const Vec3& start = trajectory->poses.front().position;
    out << "  <circle cx=\"" << num(f.px(start.x)) << "\" cy=\""
        << num(f.py(start.y))
        << "\" r=\"5.00\" fill=\"none\" stroke=\"#2b6cb0\" "
           "stroke-width=\"1.50\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string floorplan_svg(const SceneLayout& layout,
                          const SvgOptions& options) {
  return render(layout, nullptr, options);
}

std::string trajectory_svg(const SceneLayout& layout,
                           const Trajectory& trajectory,
                           const SvgOptions& options) {
  return render(layout, &trajectory, options);
}

}  // namespace roomforge

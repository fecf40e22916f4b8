#include "roomforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace roomforge {

double normalize_yaw(double yaw) {
  const double two_pi = 2.0 * kPi;
  double y = std::fmod(yaw, two_pi);
  if (y < 0.0) y += two_pi;
  if (y >= two_pi) y = 0.0;
  return y;
}

OrientedBox OrientedBox::make(Vec3 center, Vec3 half_extents, double yaw) {
  return OrientedBox{center, half_extents, normalize_yaw(yaw)};
}

double ConvexPolygon2D::area() const {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    s += vertices[j].cross(vertices[i]);
  }
  return 0.5 * s;
}

bool ConvexPolygon2D::contains(const Vec2& p) const {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 e = vertices[i] - vertices[j];
    const Vec2 d = p - vertices[j];
    if (e.cross(d) < -kVertexMergeEpsilon) return false;
  }
  return true;
}

ConvexPolygon2D footprint(const OrientedBox& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hx = box.half_extents.x;
  const double hy = box.half_extents.y;
  // Local corners CCW, rotated then translated.
  const std::array<Vec2, 4> local = {
      Vec2{-hx, -hy}, Vec2{hx, -hy}, Vec2{hx, hy}, Vec2{-hx, hy}};
  ConvexPolygon2D poly;
  poly.vertices.reserve(4);
  for (const Vec2& v : local) {
    poly.vertices.push_back({box.center.x + c * v.x - s * v.y,
                             box.center.y + s * v.x + c * v.y});
  }
  return poly;
}

namespace {

// Signed distance of p to the left of edge a->b (positive = inside for CCW).
double edge_side(const Vec2& a, const Vec2& b, const Vec2& p) {
  return (b - a).cross(p - a);
}

Vec2 line_intersect(const Vec2& a, const Vec2& b, const Vec2& p,
                    const Vec2& q) {
  const Vec2 r = b - a;
  const Vec2 s = q - p;
  const double denom = r.cross(s);
  // Caller only asks for intersections of segments straddling the edge
  // line, so denom stays away from zero.
  const double t = (p - a).cross(s) / denom;
  return a + r * t;
}

void push_merged(std::vector<Vec2>& out, const Vec2& v) {
  if (!out.empty() && (out.back() - v).norm() < kVertexMergeEpsilon) return;
  out.push_back(v);
}

}  // namespace

ConvexPolygon2D convex_clip(const ConvexPolygon2D& subject,
                            const ConvexPolygon2D& clip) {
  if (subject.vertices.size() < 3 || clip.vertices.size() < 3) return {};
  std::vector<Vec2> output = subject.vertices;
  const std::size_t m = clip.vertices.size();
  for (std::size_t e1 = m - 1, e2 = 0; e2 < m; e1 = e2++) {
    if (output.empty()) break;
    const Vec2& ca = clip.vertices[e1];
    const Vec2& cb = clip.vertices[e2];
    std::vector<Vec2> input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t v1 = n - 1, v2 = 0; v2 < n; v1 = v2++) {
      const Vec2& prev = input[v1];
      const Vec2& cur = input[v2];
      const double side_prev = edge_side(ca, cb, prev);
      const double side_cur = edge_side(ca, cb, cur);
      if (side_cur >= 0.0) {
        if (side_prev < 0.0) {
          push_merged(output, line_intersect(ca, cb, prev, cur));
        }
        push_merged(output, cur);
      } else if (side_prev >= 0.0) {
        push_merged(output, line_intersect(ca, cb, prev, cur));
      }
    }
    if (output.size() > 1 &&
        (output.front() - output.back()).norm() < kVertexMergeEpsilon) {
      output.pop_back();
    }
  }
  return ConvexPolygon2D{std::move(output)};
}

double convex_intersection_area(const ConvexPolygon2D& a,
                                const ConvexPolygon2D& b) {
  const ConvexPolygon2D inter = convex_clip(a, b);
  const double area = inter.area();
  if (!(area > kAreaEpsilon)) return 0.0;
  return area;
}

double iou3d(const OrientedBox& a, const OrientedBox& b) {
  // Degenerate boxes never overlap anything.
  if (a.half_extents.x <= 0.0 || a.half_extents.y <= 0.0 ||
      a.half_extents.z <= 0.0 || b.half_extents.x <= 0.0 ||
      b.half_extents.y <= 0.0 || b.half_extents.z <= 0.0) {
    return 0.0;
  }
  const double dz =
      std::min(a.z_max(), b.z_max()) - std::max(a.z_min(), b.z_min());
  if (dz <= 0.0) return 0.0;
  const double area = convex_intersection_area(footprint(a), footprint(b));
  if (area == 0.0) return 0.0;
  const double inter = area * dz;
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool rects_interiors_intersect(const Rect& a, const Rect& b, double eps) {
  const double ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return ox > eps && oy > eps;
}

}  // namespace roomforge

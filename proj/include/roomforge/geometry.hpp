#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace roomforge {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec2 xy() const { return {x, y}; }
};

// Area below this is treated as zero so that touching footprints score an
// exact 0 overlap instead of picking up rounding dust.
inline constexpr double kAreaEpsilon = 1e-12;
// Clipped vertices closer than this are merged.
inline constexpr double kVertexMergeEpsilon = 1e-9;

// Yaw-rotated box: axis-aligned in z, rotated about the vertical axis.
struct OrientedBox {
  Vec3 center;
  Vec3 half_extents;  // (x, y, z) half lengths at yaw 0
  double yaw = 0.0;   // radians, normalized to [0, 2*pi)

  static OrientedBox make(Vec3 center, Vec3 half_extents, double yaw);
  double volume() const {
    return 8.0 * half_extents.x * half_extents.y * half_extents.z;
  }
  double z_min() const { return center.z - half_extents.z; }
  double z_max() const { return center.z + half_extents.z; }
};

// Planar convex polygon, vertices counter-clockwise.
struct ConvexPolygon2D {
  std::vector<Vec2> vertices;

  double area() const;
  bool contains(const Vec2& p) const;  // boundary counts as inside
};

double normalize_yaw(double yaw);

// z-projection of the box: four corners, counter-clockwise.
ConvexPolygon2D footprint(const OrientedBox& box);

// Sutherland-Hodgman clip of `subject` against convex `clip`.
ConvexPolygon2D convex_clip(const ConvexPolygon2D& subject,
                            const ConvexPolygon2D& clip);

// Area of the intersection of two convex polygons; exact 0 for touching or
// disjoint inputs (area epsilon applied).
double convex_intersection_area(const ConvexPolygon2D& a,
                                const ConvexPolygon2D& b);

// IoU of two yaw-rotated boxes. Intersection volume is the product of the
// footprint intersection area and the z-interval overlap, which is exact
// because yaw preserves z extents. Returns 0 when the union volume is 0.
double iou3d(const OrientedBox& a, const OrientedBox& b);

// Axis-aligned rectangle helper used by rooms and wall slabs.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(x0 + x1) * 0.5, (y0 + y1) * 0.5}; }
  bool contains(const Vec2& p, double eps = 0.0) const {
    return p.x >= x0 - eps && p.x <= x1 + eps && p.y >= y0 - eps &&
           p.y <= y1 + eps;
  }
  ConvexPolygon2D polygon() const {
    return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  }
};

// Interior overlap of two axis-aligned rectangles (positive-measure test).
bool rects_interiors_intersect(const Rect& a, const Rect& b,
                               double eps = kVertexMergeEpsilon);

}  // namespace roomforge

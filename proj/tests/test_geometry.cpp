#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "roomforge/geometry.hpp"
#include "roomforge/rng.hpp"

using namespace roomforge;

namespace {

// Independent point-in-box check used by the Monte-Carlo oracle below.
// Deliberately avoids the clipping code under test.
bool box_contains(const OrientedBox& box, double x, double y, double z) {
  if (z < box.center.z - box.half_extents.z || z > box.center.z + box.half_extents.z) {
    return false;
  }
  const double dx = x - box.center.x;
  const double dy = y - box.center.y;
  const double c = std::cos(-box.yaw), s = std::sin(-box.yaw);
  const double lx = c * dx - s * dy;
  const double ly = s * dx + c * dy;
  return std::fabs(lx) <= box.half_extents.x && std::fabs(ly) <= box.half_extents.y;
}

double mc_iou(const OrientedBox& a, const OrientedBox& b, int samples, Rng& rng) {
  // Loose axis-aligned cover of both boxes.
  auto reach = [](const OrientedBox& box) {
    return std::hypot(box.half_extents.x, box.half_extents.y);
  };
  const double x0 = std::min(a.center.x - reach(a), b.center.x - reach(b));
  const double x1 = std::max(a.center.x + reach(a), b.center.x + reach(b));
  const double y0 = std::min(a.center.y - reach(a), b.center.y - reach(b));
  const double y1 = std::max(a.center.y + reach(a), b.center.y + reach(b));
  const double z0 = std::min(a.z_min(), b.z_min());
  const double z1 = std::max(a.z_max(), b.z_max());
  const double region = (x1 - x0) * (y1 - y0) * (z1 - z0);
  int in_a = 0, in_b = 0, in_both = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = rng.uniform(x0, x1);
    const double y = rng.uniform(y0, y1);
    const double z = rng.uniform(z0, z1);
    const bool pa = box_contains(a, x, y, z);
    const bool pb = box_contains(b, x, y, z);
    in_a += pa;
    in_b += pb;
    in_both += pa && pb;
  }
  const double inter = region * in_both / samples;
  const double uni = region * (in_a + in_b - in_both) / samples;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("normalize_yaw wraps into [0, 2pi)") {
  CHECK(normalize_yaw(0.0) == doctest::Approx(0.0));
  CHECK(normalize_yaw(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(normalize_yaw(-kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(normalize_yaw(5.0 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_yaw(7.0) >= 0.0);
  CHECK(normalize_yaw(7.0) < 2.0 * kPi);
}

TEST_CASE("footprint of an axis-aligned box") {
  const OrientedBox box = OrientedBox::make({1.0, 2.0, 0.5}, {0.5, 0.25, 0.5}, 0.0);
  const ConvexPolygon2D fp = footprint(box);
  REQUIRE(fp.vertices.size() == 4);
  CHECK(fp.vertices[0].x == doctest::Approx(0.5));
  CHECK(fp.vertices[0].y == doctest::Approx(1.75));
  CHECK(fp.vertices[2].x == doctest::Approx(1.5));
  CHECK(fp.vertices[2].y == doctest::Approx(2.25));
  CHECK(fp.area() == doctest::Approx(1.0 * 0.5));
}

TEST_CASE("footprint of a quarter-turned square") {
  // Unit square spun 45 degrees: corners land on the axes at sqrt(2)/2.
  const OrientedBox box = OrientedBox::make({0, 0, 0}, {0.5, 0.5, 0.5}, kPi / 4.0);
  const ConvexPolygon2D fp = footprint(box);
  REQUIRE(fp.vertices.size() == 4);
  const double r = std::sqrt(2.0) / 2.0;
  for (const Vec2& v : fp.vertices) {
    CHECK(std::max(std::fabs(v.x), std::fabs(v.y)) == doctest::Approx(r));
    CHECK(std::min(std::fabs(v.x), std::fabs(v.y)) == doctest::Approx(0.0));
  }
  CHECK(fp.area() == doctest::Approx(1.0));
}

TEST_CASE("convex intersection area on squares") {
  const auto unit = [](double cx, double cy) {
    return footprint(OrientedBox::make({cx, cy, 0}, {0.5, 0.5, 0.5}, 0.0));
  };
  CHECK(convex_intersection_area(unit(0, 0), unit(0, 0)) == doctest::Approx(1.0));
  CHECK(convex_intersection_area(unit(0, 0), unit(0.5, 0)) == doctest::Approx(0.5));
  CHECK(convex_intersection_area(unit(0, 0), unit(3, 0)) == 0.0);
  // Edge contact must report exactly zero, not float dust.
  CHECK(convex_intersection_area(unit(0, 0), unit(1.0, 0)) == 0.0);
}

TEST_CASE("intersection area is symmetric and bounded") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const OrientedBox a = OrientedBox::make(
        {rng.uniform(-1, 1), rng.uniform(-1, 1), 0.5},
        {rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0), 0.5}, rng.uniform(0, 6.28));
    const OrientedBox b = OrientedBox::make(
        {rng.uniform(-1, 1), rng.uniform(-1, 1), 0.5},
        {rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0), 0.5}, rng.uniform(0, 6.28));
    const ConvexPolygon2D fa = footprint(a), fb = footprint(b);
    const double ab = convex_intersection_area(fa, fb);
    const double ba = convex_intersection_area(fb, fa);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ab <= std::min(fa.area(), fb.area()) + 1e-9);
    CHECK(ab >= 0.0);
  }
}

TEST_CASE("iou3d exact reference values") {
  const OrientedBox a = OrientedBox::make({0, 0, 0.5}, {0.5, 0.5, 0.5}, 0.0);
  SUBCASE("identical boxes") {
    CHECK(iou3d(a, a) == doctest::Approx(1.0));
  }
  SUBCASE("half-overlapping unit cubes give 1/3") {
    const OrientedBox b = OrientedBox::make({0.5, 0, 0.5}, {0.5, 0.5, 0.5}, 0.0);
    CHECK(iou3d(a, b) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("face contact is exactly zero") {
    const OrientedBox b = OrientedBox::make({1.0, 0, 0.5}, {0.5, 0.5, 0.5}, 0.0);
    CHECK(iou3d(a, b) == 0.0);
    const OrientedBox stacked = OrientedBox::make({0, 0, 1.5}, {0.5, 0.5, 0.5}, 0.0);
    CHECK(iou3d(a, stacked) == 0.0);
  }
  SUBCASE("flush contact at a near-exact yaw is exactly zero") {
    const OrientedBox b = OrientedBox::make({1.0, 0, 0.5}, {0.5, 0.5, 0.5}, kPi);
    CHECK(iou3d(a, b) == 0.0);
  }
  SUBCASE("z-disjoint boxes give zero") {
    const OrientedBox high = OrientedBox::make({0, 0, 5.0}, {0.5, 0.5, 0.5}, 0.0);
    CHECK(iou3d(a, high) == 0.0);
  }
  SUBCASE("degenerate box gives zero") {
    const OrientedBox flat = OrientedBox::make({0, 0, 0.5}, {0.5, 0.0, 0.5}, 0.0);
    CHECK(iou3d(a, flat) == 0.0);
  }
}

TEST_CASE("iou3d is invariant under a shared rotation") {
  const OrientedBox a = OrientedBox::make({0.2, -0.1, 0.4}, {0.5, 0.3, 0.4}, 0.3);
  const OrientedBox b = OrientedBox::make({0.6, 0.2, 0.5}, {0.4, 0.6, 0.5}, 1.1);
  const double base = iou3d(a, b);
  for (double spin : {0.7, kPi / 2.0, 2.4}) {
    const double c = std::cos(spin), s = std::sin(spin);
    auto rotate = [&](const OrientedBox& box) {
      return OrientedBox::make({c * box.center.x - s * box.center.y,
                                s * box.center.x + c * box.center.y, box.center.z},
                               box.half_extents, box.yaw + spin);
    };
    CHECK(iou3d(rotate(a), rotate(b)) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("iou3d matches a Monte-Carlo volume oracle") {
  Rng gen(2024);
  Rng sampler(777);
  int overlapping_pairs = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const OrientedBox a = OrientedBox::make(
        {gen.uniform(-0.3, 0.3), gen.uniform(-0.3, 0.3), gen.uniform(0.3, 0.7)},
        {gen.uniform(0.3, 0.8), gen.uniform(0.3, 0.8), gen.uniform(0.3, 0.7)},
        gen.uniform(0.0, 6.28));
    const OrientedBox b = OrientedBox::make(
        {gen.uniform(-0.3, 0.3), gen.uniform(-0.3, 0.3), gen.uniform(0.3, 0.7)},
        {gen.uniform(0.3, 0.8), gen.uniform(0.3, 0.8), gen.uniform(0.3, 0.7)},
        gen.uniform(0.0, 6.28));
    const double exact = iou3d(a, b);
    const double estimate = mc_iou(a, b, 200000, sampler);
    CHECK(exact == doctest::Approx(estimate).epsilon(0.03));
    if (exact > 0.05) ++overlapping_pairs;
  }
  // The generator ranges are tuned so the oracle actually exercises overlap.
  CHECK(overlapping_pairs >= 4);
}

TEST_CASE("rect helpers") {
  const Rect r{1.0, 2.0, 4.0, 6.0};
  CHECK(r.width() == doctest::Approx(3.0));
  CHECK(r.height() == doctest::Approx(4.0));
  CHECK(r.area() == doctest::Approx(12.0));
  CHECK(r.contains({2.0, 3.0}));
  CHECK_FALSE(r.contains({0.0, 3.0}));
  CHECK(rects_interiors_intersect(r, Rect{3.0, 5.0, 9.0, 9.0}));
  CHECK_FALSE(rects_interiors_intersect(r, Rect{4.0, 2.0, 8.0, 6.0}));
}

}  // TEST_SUITE

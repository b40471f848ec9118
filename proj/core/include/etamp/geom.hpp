#ifndef ETAMP_GEOM_HPP
#define ETAMP_GEOM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace etamp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  double norm2() const { return x * x + y * y; }
  Vec2 perp() const { return {-y, x}; }
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double theta);

// Shortest signed angular difference b - a, in [-pi, pi).
double angle_diff(double a, double b);

// SE(2) configuration. theta is kept normalized by the constructor.
struct Config {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Config() = default;
  Config(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Vec2 pos() const { return {x, y}; }
  bool operator==(const Config& o) const { return x == o.x && y == o.y && theta == o.theta; }
};

// Linear position interpolation, shortest-arc angular interpolation.
Config interpolate(const Config& a, const Config& b, double s);

using Polygon = std::vector<Vec2>;

// Signed area (positive for counter-clockwise winding).
double polygon_area(const Polygon& poly);

// Ensures counter-clockwise winding; returns a copy.
Polygon ccw(const Polygon& poly);

bool point_in_polygon(const Vec2& p, const Polygon& poly);

// Minimum distance from p to the polygon boundary.
double dist_point_polygon_boundary(const Vec2& p, const Polygon& poly);

// Distance from p to the polygon as a solid region (0 when inside).
double dist_point_polygon(const Vec2& p, const Polygon& poly);

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);

// True when the two polygons overlap as solid regions (touching counts).
bool polygons_intersect(const Polygon& a, const Polygon& b);

// True when a disc (center c, radius r) overlaps the solid polygon.
bool disc_intersects_polygon(const Vec2& c, double r, const Polygon& poly);

// Ear-clipping triangulation of a simple polygon (any winding).
// Returns triangles; a convex input yields a fan.
std::vector<Polygon> triangulate(const Polygon& poly);

bool polygon_is_convex(const Polygon& poly);

// Rigid transform of a body-frame polygon by pose (x, y, theta).
Polygon transform(const Polygon& body, const Config& pose);

// Axis-aligned bounding box.
struct Aabb {
  Vec2 lo;
  Vec2 hi;
  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

Aabb polygon_aabb(const Polygon& poly);

// Maximum caliper width (diameter of the vertex set).
double polygon_max_width(const Polygon& poly);

// Conservative outward offset: the result contains every point within delta
// of the input (exact miter for convex input, radial overshoot otherwise).
Polygon inflate_polygon(const Polygon& poly, double delta);

}  // namespace etamp

#endif  // ETAMP_GEOM_HPP

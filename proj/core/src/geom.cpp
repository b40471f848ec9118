#include "etamp/geom.hpp"

#include <algorithm>
#include <stdexcept>

namespace etamp {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * M_PI;
  double t = std::fmod(theta + M_PI, two_pi);
  if (t < 0.0) t += two_pi;
  return t - M_PI;
}

double angle_diff(double a, double b) { return wrap_angle(b - a); }

Config interpolate(const Config& a, const Config& b, double s) {
  double d = angle_diff(a.theta, b.theta);
  return Config(a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s, a.theta + d * s);
}

double polygon_area(const Polygon& poly) {
  double acc = 0.0;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    acc += p.cross(q);
  }
  return 0.5 * acc;
}

Polygon ccw(const Polygon& poly) {
  Polygon out = poly;
  if (polygon_area(poly) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  // Crossing-number test; boundary points may land either way, callers that
  // care about the boundary use distance queries.
  bool inside = false;
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double t = (p.y - a.y) / (b.y - a.y);
      if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
    }
  }
  return inside;
}

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.norm2();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

double dist_point_polygon_boundary(const Vec2& p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i)
    best = std::min(best, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
  return best;
}

double dist_point_polygon(const Vec2& p, const Polygon& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  return dist_point_polygon_boundary(p, poly);
}

static int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = (b - a).cross(c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

static bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  int o1 = orientation(p1, p2, q1);
  int o2 = orientation(p1, p2, q2);
  int o3 = orientation(q1, q2, p1);
  int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  size_t na = a.size(), nb = b.size();
  for (size_t i = 0; i < na; ++i)
    for (size_t j = 0; j < nb; ++j)
      if (segments_intersect(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb])) return true;
  // No edge crossings: one polygon may still contain the other.
  if (point_in_polygon(a[0], b)) return true;
  if (point_in_polygon(b[0], a)) return true;
  return false;
}

bool disc_intersects_polygon(const Vec2& c, double r, const Polygon& poly) {
  return dist_point_polygon(c, poly) <= r;
}

bool polygon_is_convex(const Polygon& poly) {
  size_t n = poly.size();
  if (n < 4) return true;
  int sign = 0;
  for (size_t i = 0; i < n; ++i) {
    int o = orientation(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
    if (o == 0) continue;
    if (sign == 0)
      sign = o;
    else if (o != sign)
      return false;
  }
  return true;
}

std::vector<Polygon> triangulate(const Polygon& poly) {
  Polygon pts = ccw(poly);
  size_t n = pts.size();
  if (n < 3) throw std::invalid_argument("triangulate: degenerate polygon");
  std::vector<Polygon> tris;
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;

  auto is_ear = [&](size_t a, size_t b, size_t c) {
    if (orientation(pts[a], pts[b], pts[c]) <= 0) return false;
    for (size_t k : idx) {
      if (k == a || k == b || k == c) continue;
      if (point_in_polygon(pts[k], {pts[a], pts[b], pts[c]})) return false;
    }
    return true;
  };

  size_t guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < idx.size(); ++i) {
      size_t a = idx[(i + idx.size() - 1) % idx.size()];
      size_t b = idx[i];
      size_t c = idx[(i + 1) % idx.size()];
      if (is_ear(a, b, c)) {
        tris.push_back({pts[a], pts[b], pts[c]});
        idx.erase(idx.begin() + static_cast<long>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      if (++guard > 1) throw std::invalid_argument("triangulate: polygon not simple");
      // Collinear runs can starve the ear test; drop an exactly-collinear vertex.
      for (size_t i = 0; i < idx.size(); ++i) {
        size_t a = idx[(i + idx.size() - 1) % idx.size()];
        size_t b = idx[i];
        size_t c = idx[(i + 1) % idx.size()];
        if (orientation(pts[a], pts[b], pts[c]) == 0) {
          idx.erase(idx.begin() + static_cast<long>(i));
          break;
        }
      }
    }
  }
  tris.push_back({pts[idx[0]], pts[idx[1]], pts[idx[2]]});
  return tris;
}

Polygon transform(const Polygon& body, const Config& pose) {
  double c = std::cos(pose.theta);
  double s = std::sin(pose.theta);
  Polygon out;
  out.reserve(body.size());
  for (const Vec2& p : body)
    out.push_back({pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y});
  return out;
}

Aabb polygon_aabb(const Polygon& poly) {
  Aabb box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Vec2& p : poly) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

double polygon_max_width(const Polygon& poly) {
  double best = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j)
      best = std::max(best, (poly[i] - poly[j]).norm());
  return best;
}

Polygon inflate_polygon(const Polygon& poly, double delta) {
  if (delta <= 0.0 || poly.size() < 3) return poly;
  if (polygon_is_convex(poly)) {
    // miter offset: each vertex moves to the intersection of its two edge
    // lines pushed outward by delta
    Polygon p = ccw(poly);
    const size_t n = p.size();
    Polygon out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      Vec2 prev = p[(i + n - 1) % n], cur = p[i], next = p[(i + 1) % n];
      Vec2 d0 = (cur - prev).normalized();
      Vec2 d1 = (next - cur).normalized();
      Vec2 n0{d0.y, -d0.x};  // outward for ccw winding
      Vec2 n1{d1.y, -d1.x};
      Vec2 bis = n0 + n1;
      double denom = bis.dot(n0);
      if (denom < 1e-9) {
        out.push_back(cur + n0 * delta);
        continue;
      }
      out.push_back(cur + bis * (delta / denom));
    }
    return out;
  }
  // conservative fallback: push vertices radially from the centroid
  Vec2 c{0.0, 0.0};
  for (const Vec2& p : poly) c = c + p;
  c = c * (1.0 / static_cast<double>(poly.size()));
  Polygon out;
  out.reserve(poly.size());
  for (const Vec2& p : poly) {
    Vec2 r = p - c;
    double len = r.norm();
    out.push_back(len < 1e-9 ? p : p + r * (2.0 * delta / len));
  }
  return out;
}

}  // namespace etamp

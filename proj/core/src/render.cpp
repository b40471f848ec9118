#include "etamp/render.hpp"

#include <cstdio>

namespace etamp {

namespace {

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* kPathColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"};

}  // namespace

std::string render_svg(const WorldState& w, const std::vector<std::vector<Config>>& paths,
                       const RenderOptions& opts) {
  const double m = opts.margin_m;
  const double s = opts.scale;
  const Vec2 lo = w.bounds.lo;
  const Vec2 hi = w.bounds.hi;
  auto sx = [&](double x) { return (x - lo.x + m) * s; };
  auto sy = [&](double y) { return (hi.y + m - y) * s; };
  auto pt = [&](const Vec2& p) { return num(sx(p.x)) + "," + num(sy(p.y)); };
  auto poly_points = [&](const Polygon& poly) {
    std::string out;
    for (size_t i = 0; i < poly.size(); ++i) {
      if (i) out += " ";
      out += pt(poly[i]);
    }
    return out;
  };

  double width = (hi.x - lo.x + 2.0 * m) * s;
  double height = (hi.y - lo.y + 2.0 * m) * s;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" fill=\"#fbfaf7\"/>\n";
  // workspace bounds
  svg += "<rect x=\"" + num(sx(lo.x)) + "\" y=\"" + num(sy(hi.y)) + "\" width=\"" +
         num((hi.x - lo.x) * s) + "\" height=\"" + num((hi.y - lo.y) * s) +
         "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1.5\"/>\n";

  for (const Polygon& surf : w.surfaces) {
    svg += "<polygon points=\"" + poly_points(surf) +
           "\" fill=\"#dcebf7\" stroke=\"#9fc4e0\" stroke-width=\"1\"/>\n";
  }
  for (const Polygon& st : w.statics) {
    svg += "<polygon points=\"" + poly_points(st) +
           "\" fill=\"#555555\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }
  for (const MovableObject& o : w.movables) {
    bool carried = w.held && *w.held == o.id;
    Polygon fp = carried ? transform(o.footprint, w.robot.pose) : o.world_footprint();
    svg += "<polygon points=\"" + poly_points(fp) +
           "\" fill=\"#e8b84b\" stroke=\"#a8791a\" stroke-width=\"1\"/>\n";
    Vec2 c = carried ? w.robot.pose.pos() : o.pose.pos();
    svg += "<text x=\"" + num(sx(c.x)) + "\" y=\"" + num(sy(c.y)) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" "
           "fill=\"#5a430f\">" +
           o.id + "</text>\n";
  }
  for (const auto& [name, an] : w.anchors) {
    Vec2 c = an.pose.pos();
    if (an.kind == Anchor::Kind::Near) {
      if (const MovableObject* mo = w.find_movable(an.near_id)) c = mo->pose.pos();
    }
    if (an.kind != Anchor::Kind::Pose) {
      svg += "<circle cx=\"" + num(sx(c.x)) + "\" cy=\"" + num(sy(c.y)) + "\" r=\"" +
             num(an.radius * s) +
             "\" fill=\"none\" stroke=\"#bbaacc\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
    double cs = 5.0;
    svg += "<path d=\"M " + num(sx(c.x) - cs) + " " + num(sy(c.y)) + " H " + num(sx(c.x) + cs) +
           " M " + num(sx(c.x)) + " " + num(sy(c.y) - cs) + " V " + num(sy(c.y) + cs) +
           "\" stroke=\"#7a6a8a\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + num(sx(c.x) + 6.0) + "\" y=\"" + num(sy(c.y) - 6.0) +
           "\" font-family=\"monospace\" font-size=\"11\" fill=\"#7a6a8a\">" + name +
           "</text>\n";
  }
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& path = paths[pi];
    if (path.size() < 2) continue;
    std::string pts;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) pts += " ";
      pts += pt(path[i].pos());
    }
    const char* color = kPathColors[pi % (sizeof(kPathColors) / sizeof(kPathColors[0]))];
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\" stroke-linejoin=\"round\"/>\n";
  }
  // robot last, on top
  const Config& rp = w.robot.pose;
  svg += "<circle cx=\"" + num(sx(rp.x)) + "\" cy=\"" + num(sy(rp.y)) + "\" r=\"" +
         num(w.robot.radius * s) +
         "\" fill=\"#9ec9ea\" fill-opacity=\"0.8\" stroke=\"#33618a\" stroke-width=\"1.5\"/>\n";
  Vec2 tip{rp.x + w.robot.radius * std::cos(rp.theta), rp.y + w.robot.radius * std::sin(rp.theta)};
  svg += "<line x1=\"" + num(sx(rp.x)) + "\" y1=\"" + num(sy(rp.y)) + "\" x2=\"" + num(sx(tip.x)) +
         "\" y2=\"" + num(sy(tip.y)) + "\" stroke=\"#33618a\" stroke-width=\"2\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace etamp

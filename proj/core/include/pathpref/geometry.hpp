#pragma once

#include <vector>

namespace pathpref {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

using Polygon = std::vector<Point2>;

/// Axis-aligned rectangle [x0, x1) x [y0, y1) in cell units or meters.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool operator==(const Rect&) const = default;
  Polygon to_polygon() const { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }
};

double distance(Point2 a, Point2 b);

/// Even-odd rule; points on the boundary may land either way.
bool point_in_polygon(Point2 p, const Polygon& poly);

/// Proper or touching intersection of two closed segments.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// True when the segment touches the polygon's boundary or lies inside it.
bool segment_hits_polygon(Point2 a, Point2 b, const Polygon& poly);

/// No two non-adjacent edges intersect.
bool is_simple(const Polygon& poly);

}  // namespace pathpref

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/physics.hpp"

#include <algorithm>
#include <cmath>

#include "fmt.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

namespace {

double weight_newtons(double mass_g) { return mass_g / 1000.0 * kGravity; }

Verdict verdict_from_margin(double margin, double tol) {
  if (std::abs(margin) < tol) return Verdict::marginal;
  return margin > 0.0 ? Verdict::stable : Verdict::unstable;
}

}  // namespace

MassProperties mass_properties(const DensityField& field, bool exclude_nan) {
  validate(field);
  const double cell = field.voxel_size * field.voxel_size * field.voxel_size;

  struct Pass1 {
    double mass = 0.0;
    double wx = 0.0, wy = 0.0, wz = 0.0;
  };
  const std::size_t n = field.voxel_count();
  const std::size_t row = static_cast<std::size_t>(field.nx);
  const std::size_t slab = row * static_cast<std::size_t>(field.ny);

  auto center_of = [&field, row, slab](std::size_t i) {
    const int iz = static_cast<int>(i / slab);
    const std::size_t rem = i % slab;
    return field.voxel_center(static_cast<int>(rem % row), static_cast<int>(rem / row), iz);
  };

  const Pass1 first = parallel_reduce<Pass1>(
      n, 65536, Pass1{},
      [&](std::size_t i0, std::size_t i1) {
        Pass1 acc;
        for (std::size_t i = i0; i < i1; ++i) {
          const double rho = field.rho[i];
          if (std::isnan(rho)) {
            if (!exclude_nan) {
              throw ValidationError(fmt(
                  "voxel %zu is not-a-number; pass exclude_nan to skip unidentifiable voxels",
                  i));
            }
            continue;
          }
          const double m = rho * cell;
          const Vec3 c = center_of(i);
          acc.mass += m;
          acc.wx += m * c.x;
          acc.wy += m * c.y;
          acc.wz += m * c.z;
        }
        return acc;
      },
      [](Pass1 a, const Pass1& b) {
        a.mass += b.mass;
        a.wx += b.wx;
        a.wy += b.wy;
        a.wz += b.wz;
        return a;
      });

  if (!(first.mass > 0.0)) throw DegenerateError("density field has zero total mass");

  MassProperties props;
  props.mass = first.mass;
  props.com = Vec3{first.wx, first.wy, first.wz} / first.mass;

  struct Pass2 {
    double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;
  };
  const Vec3 com = props.com;
  const Pass2 second = parallel_reduce<Pass2>(
      n, 65536, Pass2{},
      [&](std::size_t i0, std::size_t i1) {
        Pass2 acc;
        for (std::size_t i = i0; i < i1; ++i) {
          const double rho = field.rho[i];
          if (std::isnan(rho)) continue;
          const double m = rho * cell;
          const Vec3 d = center_of(i) - com;
          acc.xx += m * (d.y * d.y + d.z * d.z);
          acc.yy += m * (d.x * d.x + d.z * d.z);
          acc.zz += m * (d.x * d.x + d.y * d.y);
          acc.xy += m * d.x * d.y;
          acc.xz += m * d.x * d.z;
          acc.yz += m * d.y * d.z;
        }
        return acc;
      },
      [](Pass2 a, const Pass2& b) {
        a.xx += b.xx;
        a.yy += b.yy;
        a.zz += b.zz;
        a.xy += b.xy;
        a.xz += b.xz;
        a.yz += b.yz;
        return a;
      });

  props.inertia.m = {{{second.xx, -second.xy, -second.xz},
                      {-second.xy, second.yy, -second.yz},
                      {-second.xz, -second.yz, second.zz}}};
  return props;
}

Mat3 inertia_about(const MassProperties& props, const Vec3& point) {
  const Vec3 d = props.com - point;
  const double d2 = d.dot(d);
  Mat3 shift = Mat3::identity() * d2;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      shift.m[i][j] -= d.at(i) * d.at(j);
    }
  }
  return props.inertia + shift * props.mass;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  if (points.size() <= 2) return points;

  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = points.size() - 1; i-- > 0;) {  // upper
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() == 2 && hull[0].x == hull[1].x && hull[0].y == hull[1].y) hull.resize(1);

  // Rotate so the walk starts at the lowest-then-leftmost vertex; the chain
  // above already runs counterclockwise.
  std::size_t start = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].y < hull[start].y ||
        (hull[i].y == hull[start].y && hull[i].x < hull[start].x)) {
      start = i;
    }
  }
  std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(start), hull.end());
  return hull;
}

namespace {

// Signed distance from p to the hull boundary: positive inside. Degenerate
// hulls (point, segment) give the negated point/line distance, never a
// positive value.
double hull_margin(const std::vector<Vec2>& hull, const Vec2& p) {
  if (hull.empty()) throw ValidationError("support polygon needs at least one point");
  if (hull.size() == 1) {
    const Vec2 d{p.x - hull[0].x, p.y - hull[0].y};
    return -std::sqrt(d.x * d.x + d.y * d.y);
  }
  if (hull.size() == 2) {
    const Vec2 e{hull[1].x - hull[0].x, hull[1].y - hull[0].y};
    const double len = std::sqrt(e.x * e.x + e.y * e.y);
    const double cross = e.x * (p.y - hull[0].y) - e.y * (p.x - hull[0].x);
    return -std::abs(cross) / len;
  }
  double margin = 1e300;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    const Vec2 e{b.x - a.x, b.y - a.y};
    const double len = std::sqrt(e.x * e.x + e.y * e.y);
    if (len == 0.0) continue;
    const double cross = e.x * (p.y - a.y) - e.y * (p.x - a.x);
    margin = std::min(margin, cross / len);
  }
  return margin;
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::pick: return "pick";
    case Scenario::place: return "place";
    case Scenario::push: return "push";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
  }
  return "?";
}

StabilityReport grasp_stability(const MassProperties& props, const Vec3& grasp_point,
                                const Vec3& grasp_axis, double max_friction_torque_ncm,
                                double marginal_tol) {
  if (std::abs(grasp_axis.norm() - 1.0) > 1e-9) {
    throw ValidationError("grasp_axis must be a unit vector");
  }
  if (!(max_friction_torque_ncm > 0.0)) {
    throw ValidationError("max_friction_torque must be > 0");
  }
  const Vec3 lever = props.com - grasp_point;                    // cm
  const Vec3 force{0.0, 0.0, -weight_newtons(props.mass)};      // N
  const Vec3 torque = lever.cross(force);                       // N*cm
  const double moment = std::abs(torque.dot(grasp_axis));

  StabilityReport report;
  report.scenario = Scenario::pick;
  report.moment_ncm = moment;
  report.margin = max_friction_torque_ncm - moment;
  report.verdict = verdict_from_margin(report.margin, marginal_tol);
  return report;
}

StabilityReport tip_over_check(const MassProperties& props, const SupportPolygon& support,
                               const Tilt& tilt, double marginal_tol) {
  if (support.points.empty()) throw ValidationError("support polygon needs at least one point");
  if (std::abs(tilt.axis.norm() - 1.0) > 1e-9) {
    throw ValidationError("tilt axis must be a unit vector");
  }
  const Mat3 rot = Mat3::rotation(tilt.axis, tilt.angle_rad);
  const Vec3 com_tilted = tilt.pivot + rot * (props.com - tilt.pivot);
  const Vec2 ground{com_tilted.x, com_tilted.y};

  const std::vector<Vec2> hull = convex_hull(support.points);
  const double margin = hull_margin(hull, ground);

  StabilityReport report;
  report.scenario = Scenario::place;
  report.margin = margin;
  report.moment_ncm = weight_newtons(props.mass) * std::abs(margin);
  report.verdict = verdict_from_margin(margin, marginal_tol);
  return report;
}

StabilityReport push_moment_check(const MassProperties& props, const Vec3& push_point,
                                  double push_force_n, const PivotLine2D& pivot_edge,
                                  double friction_coefficient, double marginal_tol) {
  if (!(push_force_n > 0.0)) throw ValidationError("push force must be > 0");
  if (!(friction_coefficient >= 0.0)) throw ValidationError("friction must be >= 0");
  const double dir_len = std::sqrt(pivot_edge.direction.x * pivot_edge.direction.x +
                                   pivot_edge.direction.y * pivot_edge.direction.y);
  if (!(dir_len > 0.0)) throw ValidationError("pivot edge direction must be nonzero");

  const double weight = weight_newtons(props.mass);
  const double h = push_point.z;  // cm above the ground plane
  const double cross = pivot_edge.direction.x * (props.com.y - pivot_edge.point.y) -
                       pivot_edge.direction.y * (props.com.x - pivot_edge.point.x);
  const double d = std::abs(cross) / dir_len;  // CoM projection to pivot edge, cm

  const double overturning = push_force_n * h;  // N*cm
  const double restoring = weight * d;          // N*cm
  const bool slides = push_force_n > friction_coefficient * weight;

  StabilityReport report;
  report.scenario = Scenario::push;
  report.moment_ncm = overturning;
  report.margin = restoring - overturning;
  if (slides) {
    // Sliding preempts tipping: the object translates, which counts stable.
    report.verdict = Verdict::stable;
  } else {
    report.verdict = verdict_from_margin(report.margin, marginal_tol);
  }
  return report;
}

std::string mass_properties_to_json(const MassProperties& props) {
  detail::json doc;
  doc["mass_g"] = props.mass;
  doc["com_cm"] = {props.com.x, props.com.y, props.com.z};
  auto tensor = detail::json::array();
  for (int i = 0; i < 3; ++i) {
    tensor.push_back({props.inertia.m[i][0], props.inertia.m[i][1], props.inertia.m[i][2]});
  }
  doc["inertia_g_cm2"] = std::move(tensor);
  return doc.dump(2) + "\n";
}

MassProperties mass_properties_from_json_file(const std::string& path) {
  const auto doc = detail::parse_json_file(path);
  MassProperties props;
  props.mass = detail::require_number(doc, "mass_g", path);
  const auto& com = detail::require_array(doc, "com_cm", 3, path);
  props.com = Vec3{com[0].get<double>(), com[1].get<double>(), com[2].get<double>()};
  const auto& tensor = detail::require_array(doc, "inertia_g_cm2", 3, path);
  for (int i = 0; i < 3; ++i) {
    if (!tensor[i].is_array() || tensor[i].size() != 3) {
      throw ValidationError(fmt("%s: inertia_g_cm2 must be a 3x3 matrix", path.c_str()));
    }
    for (int j = 0; j < 3; ++j) props.inertia.m[i][j] = tensor[i][j].get<double>();
  }
  return props;
}

std::string stability_report_to_json(const StabilityReport& report) {
  detail::json doc;
  doc["scenario"] = to_string(report.scenario);
  doc["verdict"] = to_string(report.verdict);
  doc["moment_ncm"] = report.moment_ncm;
  doc["margin"] = report.margin;
  return doc.dump(2) + "\n";
}

}  // namespace xden

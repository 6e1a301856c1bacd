// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "fmt.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"

namespace xden {

using detail::fmt;

const char* to_string(BeamKind kind) { return kind == BeamKind::parallel ? "parallel" : "cone"; }

BeamKind beam_kind_from_string(const std::string& s) {
  if (s == "parallel") return BeamKind::parallel;
  if (s == "cone") return BeamKind::cone;
  throw ValidationError(fmt("unknown beam kind \"%s\" (parallel|cone)", s.c_str()));
}

Vec3 ProjectionGeometry::principal_direction() const {
  if (kind == BeamKind::parallel) return normal().normalized();
  // Geometric detector center, which sits between pixel centers for even
  // resolutions.
  const Vec3 center = detector_origin + detector_u_axis * (0.5 * pixel_pitch * (width - 1)) +
                      detector_v_axis * (0.5 * pixel_pitch * (height - 1));
  const Vec3 d = center - source_position;
  const double n = d.norm();
  if (n == 0.0) return normal().normalized();
  return d / n;
}

void validate(const ProjectionGeometry& geom) {
  const double nu = geom.detector_u_axis.norm();
  const double nv = geom.detector_v_axis.norm();
  if (std::abs(nu - 1.0) > 1e-12 || std::abs(nv - 1.0) > 1e-12) {
    throw ValidationError(fmt("detector axes must be unit length (|u|=%.17g, |v|=%.17g)", nu, nv));
  }
  if (std::abs(geom.detector_u_axis.dot(geom.detector_v_axis)) >= 1e-12) {
    throw ValidationError("detector axes must be orthogonal (|u.v| >= 1e-12)");
  }
  if (!(geom.pixel_pitch > 0.0)) throw ValidationError("pixel_pitch must be > 0");
  if (geom.width < 1 || geom.height < 1) throw ValidationError("detector needs width,height >= 1");
  if (!(geom.i0 > 0.0)) throw ValidationError("i0 must be > 0");
  if (geom.kind == BeamKind::cone) {
    const double dist = (geom.source_position - geom.detector_origin).dot(geom.normal());
    if (std::abs(dist) <= 1e-12) {
      throw ValidationError("cone source lies on the detector plane");
    }
  }
}

void validate(const BiplanarSetup& setup, double angle_tol_rad) {
  validate(setup.view0);
  validate(setup.view1);
  const double c = setup.view0.principal_direction().dot(setup.view1.principal_direction());
  // cos(pi/2 + e) ~ -e; |c| bounds the angular deviation from orthogonal.
  if (std::abs(c) > angle_tol_rad) {
    throw ValidationError(
        fmt("views are not orthogonal: |cos| = %.3g exceeds %.3g", std::abs(c), angle_tol_rad));
  }
}

Ray ray_for_pixel(const ProjectionGeometry& geom, int px, int py) {
  if (px < 0 || px >= geom.width || py < 0 || py >= geom.height) {
    throw std::out_of_range(
        fmt("pixel (%d,%d) outside %dx%d detector", px, py, geom.width, geom.height));
  }
  const Vec3 center = geom.pixel_center(px, py);
  if (geom.kind == BeamKind::parallel) {
    const Vec3 n = geom.normal().normalized();
    return Ray{center - n * geom.standoff, n};
  }
  const Vec3 d = center - geom.source_position;
  const double n = d.norm();
  if (n == 0.0) throw ValidationError("cone source coincides with a pixel center");
  return Ray{geom.source_position, d / n};
}

namespace {

ProjectionGeometry plan_view(const Box& box, const Vec3& dir, const Vec3& u, const Vec3& v,
                             int resolution, double pitch, BeamKind kind, double i0) {
  const Vec3 center = box.center();
  const double reach = 4.0 * box.half_diagonal();

  ProjectionGeometry geom;
  geom.kind = kind;
  geom.detector_u_axis = u;
  geom.detector_v_axis = v;
  geom.pixel_pitch = pitch;
  geom.width = resolution;
  geom.height = resolution;
  geom.i0 = i0;
  const Vec3 detector_center = center + dir * reach;
  if (kind == BeamKind::cone) geom.source_position = center - dir * reach;

  // Project the box corners onto the detector plane and demand a 5% margin.
  double max_u = 0.0;
  double max_v = 0.0;
  for (const Vec3& corner : box.corners()) {
    Vec3 hit;
    if (kind == BeamKind::parallel) {
      hit = corner;
    } else {
      const Vec3 from_source = corner - geom.source_position;
      const double denom = from_source.dot(dir);
      // Corners sit strictly between source and detector, so denom > 0.
      const double t = (detector_center - geom.source_position).dot(dir) / denom;
      hit = geom.source_position + from_source * t;
    }
    const Vec3 rel = hit - detector_center;
    max_u = std::max(max_u, std::abs(rel.dot(u)));
    max_v = std::max(max_v, std::abs(rel.dot(v)));
  }
  const double required = 2.0 * 1.05 * std::max(max_u, max_v);
  const double extent = resolution * pitch;
  if (required > extent) {
    throw CoverageError(fmt("detector extent %.6g cm cannot cover the projected box: "
                            "%.6g cm needed (5%% margin included)",
                            extent, required));
  }

  const double half_span = 0.5 * pitch * (resolution - 1);
  geom.detector_origin = detector_center - u * half_span - v * half_span;
  return geom;
}

}  // namespace

BiplanarSetup make_orthogonal_biplanar(const Box& bounding_box, int detector_resolution,
                                       double pixel_pitch, BeamKind kind, double i0) {
  if (detector_resolution < 1) throw ValidationError("detector_resolution must be >= 1");
  if (!(pixel_pitch > 0.0)) throw ValidationError("pixel_pitch must be > 0");
  if (!(i0 > 0.0)) throw ValidationError("i0 must be > 0");
  if (bounding_box.degenerate()) {
    throw CoverageError("bounding box has zero extent; nothing to cover");
  }

  BiplanarSetup setup;
  setup.view0 = plan_view(bounding_box, Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                          detector_resolution, pixel_pitch, kind, i0);
  setup.view1 = plan_view(bounding_box, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1},
                          detector_resolution, pixel_pitch, kind, i0);
  validate(setup);
  return setup;
}

namespace {

using detail::json;

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& doc, const char* key, const std::string& origin) {
  const json& arr = detail::require_array(doc, key, 3, origin);
  for (const auto& e : arr) {
    if (!e.is_number()) {
      throw ValidationError(fmt("%s: field \"%s\" must hold numbers", origin.c_str(), key));
    }
  }
  return Vec3{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

json geometry_to_json(const ProjectionGeometry& geom) {
  json doc;
  doc["schema"] = "xden-geom/1";
  doc["kind"] = to_string(geom.kind);
  if (geom.kind == BeamKind::cone) doc["source_position_cm"] = vec_to_json(geom.source_position);
  doc["detector_origin_cm"] = vec_to_json(geom.detector_origin);
  doc["u_axis"] = vec_to_json(geom.detector_u_axis);
  doc["v_axis"] = vec_to_json(geom.detector_v_axis);
  doc["pixel_pitch_cm"] = geom.pixel_pitch;
  doc["width"] = geom.width;
  doc["height"] = geom.height;
  doc["i0"] = geom.i0;
  return doc;
}

ProjectionGeometry geometry_from_json(const json& doc, const std::string& origin) {
  const std::string schema = detail::require_string(doc, "schema", origin);
  if (schema != "xden-geom/1") {
    throw ValidationError(fmt("%s: schema \"%s\" is not xden-geom/1", origin.c_str(),
                              schema.c_str()));
  }
  ProjectionGeometry geom;
  geom.kind = beam_kind_from_string(detail::require_string(doc, "kind", origin));
  if (geom.kind == BeamKind::cone) {
    geom.source_position = vec_from_json(doc, "source_position_cm", origin);
  }
  geom.detector_origin = vec_from_json(doc, "detector_origin_cm", origin);
  geom.detector_u_axis = vec_from_json(doc, "u_axis", origin);
  geom.detector_v_axis = vec_from_json(doc, "v_axis", origin);
  geom.pixel_pitch = detail::require_number(doc, "pixel_pitch_cm", origin);
  geom.width = static_cast<int>(detail::require_int(doc, "width", origin));
  geom.height = static_cast<int>(detail::require_int(doc, "height", origin));
  geom.i0 = detail::require_number(doc, "i0", origin);
  validate(geom);
  return geom;
}

}  // namespace

ProjectionGeometry load_geometry(const std::string& path) {
  return geometry_from_json(detail::parse_json_file(path), path);
}

void save_geometry(const ProjectionGeometry& geom, const std::string& path) {
  detail::write_json_file(path, geometry_to_json(geom));
}

BiplanarSetup load_biplanar(const std::string& path) {
  const json doc = detail::parse_json_file(path);
  if (!doc.is_array() || doc.size() != 2) {
    throw ValidationError(fmt("%s: a biplanar file is an array of two geometry documents",
                              path.c_str()));
  }
  BiplanarSetup setup;
  setup.view0 = geometry_from_json(doc[0], path + "[0]");
  setup.view1 = geometry_from_json(doc[1], path + "[1]");
  validate(setup);
  return setup;
}

void save_biplanar(const BiplanarSetup& setup, const std::string& path) {
  detail::write_json_file(
      path, json::array({geometry_to_json(setup.view0), geometry_to_json(setup.view1)}));
}

}  // namespace xden

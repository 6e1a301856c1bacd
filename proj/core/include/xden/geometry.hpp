// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>

#include "xden/math.hpp"

namespace xden {

enum class BeamKind { parallel, cone };

const char* to_string(BeamKind kind);
BeamKind beam_kind_from_string(const std::string& s);

// One detector (plus source model). Lengths in cm; pixel (px,py) addresses
// the pixel CENTER. i0 is the pre-calibrated air-scan intensity.
struct ProjectionGeometry {
  BeamKind kind = BeamKind::parallel;
  Vec3 source_position{};       // cone only
  Vec3 detector_origin{};       // center of pixel (0,0)
  Vec3 detector_u_axis{1, 0, 0};
  Vec3 detector_v_axis{0, 1, 0};
  double pixel_pitch = 0.0;     // cm/pixel
  int width = 0;
  int height = 0;
  double i0 = 1.0;
  // Parallel rays start this far behind the detector plane so any volume
  // between source side and detector is traversed. Not serialized.
  double standoff = 1000.0;

  Vec3 normal() const { return detector_u_axis.cross(detector_v_axis); }
  Vec3 pixel_center(int px, int py) const {
    return detector_origin + detector_u_axis * (pixel_pitch * px) +
           detector_v_axis * (pixel_pitch * py);
  }
  // Unit direction a ray travels: detector normal for parallel beams,
  // source-to-detector-center for cone beams.
  Vec3 principal_direction() const;
};

struct Ray {
  Vec3 origin{};
  Vec3 direction{0, 0, 1};  // unit
};

// Two views with orthogonal principal directions.
struct BiplanarSetup {
  ProjectionGeometry view0;
  ProjectionGeometry view1;
};

// Throws ValidationError when axes are not orthonormal, sizes or i0 are out
// of range, or a cone source sits on the detector plane.
void validate(const ProjectionGeometry& geom);
void validate(const BiplanarSetup& setup, double angle_tol_rad = 1e-6);

// Throws std::out_of_range when (px,py) is outside the detector.
Ray ray_for_pixel(const ProjectionGeometry& geom, int px, int py);

// Convenience constructor: principal directions exactly +z (view0) and +x
// (view1), detectors centered on the box and sized to cover its projection
// with at least 5% margin. Throws CoverageError when the detector is too
// small (the message names the required extent) or the box is degenerate.
BiplanarSetup make_orthogonal_biplanar(const Box& bounding_box, int detector_resolution,
                                       double pixel_pitch, BeamKind kind, double i0);

// JSON document IO ("xden-geom/1"); a biplanar file is an array of exactly
// two geometry documents.
ProjectionGeometry load_geometry(const std::string& path);
void save_geometry(const ProjectionGeometry& geom, const std::string& path);
BiplanarSetup load_biplanar(const std::string& path);
void save_biplanar(const BiplanarSetup& setup, const std::string& path);

}  // namespace xden

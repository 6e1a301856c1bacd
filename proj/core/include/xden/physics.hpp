// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "xden/math.hpp"
#include "xden/recon.hpp"

namespace xden {

// Gravity acts along -z of the volume frame.
inline constexpr double kGravity = 9.81;  // m/s^2

struct MassProperties {
  double mass = 0.0;  // g
  Vec3 com{};         // cm
  Mat3 inertia{};     // g*cm^2 about the CoM, full symmetric tensor
};

// Discrete sums over voxel centers: mass, mass-weighted centroid, then the
// inertia tensor about that centroid. NaN voxels throw ValidationError
// unless exclude_nan is set; zero total mass throws DegenerateError.
MassProperties mass_properties(const DensityField& field, bool exclude_nan = false);

// Parallel-axis transport: inertia about `point` from the CoM tensor.
// Exact in the discrete sum, which the tests exploit.
Mat3 inertia_about(const MassProperties& props, const Vec3& point);

// Ground-plane contact points; the convex hull is taken internally.
struct SupportPolygon {
  std::vector<Vec2> points;  // cm
};

// Deterministic hull: counterclockwise, starting at the lowest-then-leftmost
// vertex. Collinear inputs collapse to their two extreme points.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

enum class Scenario { pick, place, push };
enum class Verdict { stable, unstable, marginal };

const char* to_string(Scenario s);
const char* to_string(Verdict v);

struct StabilityReport {
  Scenario scenario = Scenario::pick;
  Verdict verdict = Verdict::stable;
  double moment_ncm = 0.0;  // driving moment magnitude
  double margin = 0.0;      // N*cm for pick/push, cm for place; positive = stable
};

// Rotation of the body about a pivot line before a placement check.
struct Tilt {
  Vec3 axis{0, 1, 0};  // unit
  double angle_rad = 0.0;
  Vec3 pivot{};        // a point on the rotation line, cm
};

// Ground-plane line (z = 0) the pushed object would tip about.
struct PivotLine2D {
  Vec2 point{};
  Vec2 direction{1, 0};
};

// Gravitational moment about the grasp axis versus the gripper's friction
// torque capacity. margin = capacity - moment (N*cm).
StabilityReport grasp_stability(const MassProperties& props, const Vec3& grasp_point,
                                const Vec3& grasp_axis, double max_friction_torque_ncm,
                                double marginal_tol = 1e-6);

// Rotates the CoM by the tilt, projects it onto the ground plane, and tests
// it against the support hull. margin = signed distance to the nearest hull
// edge, positive inside (cm). A degenerate hull reports the line or point
// distance instead of erroring.
StabilityReport tip_over_check(const MassProperties& props, const SupportPolygon& support,
                               const Tilt& tilt, double marginal_tol = 1e-6);

// Quasi-static tipping about the pivot edge: overturning moment F*h against
// restoring moment m*g*d, unless sliding (F > mu*m*g) preempts the tip.
// margin = m*g*d - F*h (N*cm).
StabilityReport push_moment_check(const MassProperties& props, const Vec3& push_point,
                                  double push_force_n, const PivotLine2D& pivot_edge,
                                  double friction_coefficient, double marginal_tol = 1e-6);

// Report and mass-properties JSON used by the command line tools.
std::string mass_properties_to_json(const MassProperties& props);
MassProperties mass_properties_from_json_file(const std::string& path);
std::string stability_report_to_json(const StabilityReport& report);

}  // namespace xden

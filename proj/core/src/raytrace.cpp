// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmt.hpp"
#include "hash.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"
#include "xden/parallel.hpp"

namespace xden {

namespace {

constexpr double kMinSegment = 1e-12;  // cm; face grazing emits shorter slivers

struct Clip {
  double t0 = 0.0;
  double t1 = -1.0;
  bool hit() const { return t1 > t0; }
};

// Slab intersection against the volume's outer box. t0 is clamped to 0 so
// rays starting inside begin at their origin.
Clip clip_to_box(const Box& box, const Ray& ray) {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin.at(a);
    const double d = ray.direction.at(a);
    const double lo = box.min.at(a);
    const double hi = box.max.at(a);
    if (d == 0.0) {
      if (o < lo || o > hi) return {};
      continue;
    }
    const double ta = (lo - o) / d;
    const double tb = (hi - o) / d;
    t0 = std::max(t0, std::min(ta, tb));
    t1 = std::min(t1, std::max(ta, tb));
  }
  if (!(t1 > t0)) return {};
  return {t0, t1};
}

// Walks voxel boundary crossings from entry to exit, accumulating segment
// lengths per region into `acc` (dense, one slot per region id).
void trace_into(const LabelVolume& vol, const Ray& ray, std::vector<double>& acc) {
  const Box box = vol.bounding_box();
  const Clip clip = clip_to_box(box, ray);
  if (!clip.hit()) return;

  const double h = vol.voxel_size;
  const Vec3 entry = ray.origin + ray.direction * clip.t0;
  const int dims[3] = {vol.nx, vol.ny, vol.nz};
  int idx[3];
  int step[3];
  double t_max[3];
  double t_delta[3];
  for (int a = 0; a < 3; ++a) {
    const double d = ray.direction.at(a);
    const double rel = (entry.at(a) - box.min.at(a)) / h;
    idx[a] = std::clamp(static_cast<int>(std::floor(rel)), 0, dims[a] - 1);
    if (d > 0.0) {
      step[a] = 1;
      t_delta[a] = h / d;
      t_max[a] = (box.min.at(a) + (idx[a] + 1) * h - ray.origin.at(a)) / d;
    } else if (d < 0.0) {
      step[a] = -1;
      t_delta[a] = -h / d;
      t_max[a] = (box.min.at(a) + idx[a] * h - ray.origin.at(a)) / d;
    } else {
      step[a] = 0;
      t_delta[a] = std::numeric_limits<double>::infinity();
      t_max[a] = std::numeric_limits<double>::infinity();
    }
  }

  double t = clip.t0;
  while (t < clip.t1) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    const double t_next = std::min(t_max[axis], clip.t1);
    const double seg = t_next - t;
    if (seg > 0.0) acc[vol.label_at(idx[0], idx[1], idx[2])] += seg;
    t = t_next;
    if (t_max[axis] >= clip.t1) break;
    t_max[axis] += t_delta[axis];
    idx[axis] += step[axis];
    if (idx[axis] < 0 || idx[axis] >= dims[axis]) break;
  }
}

void collect(const std::vector<double>& acc, RegionLengths& out) {
  out.pairs.clear();
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k] >= kMinSegment) {
      out.pairs.push_back({static_cast<std::uint16_t>(k), acc[k]});
    }
  }
}

}  // namespace

RegionLengths trace_region_lengths(const LabelVolume& vol, const Ray& ray) {
  const double n = ray.direction.norm();
  if (std::abs(n - 1.0) > 1e-9) {
    throw ValidationError(detail::fmt("ray direction norm %.17g is not 1", n));
  }
  std::vector<double> acc(vol.region_count(), 0.0);
  trace_into(vol, ray, acc);
  RegionLengths out;
  collect(acc, out);
  return out;
}

std::uint64_t setup_hash(const BiplanarSetup& setup) {
  auto one = [](const ProjectionGeometry& g, std::uint64_t h) {
    const int kind = static_cast<int>(g.kind);
    h = detail::fnv1a(&kind, sizeof kind, h);
    const double nums[14] = {g.source_position.x, g.source_position.y, g.source_position.z,
                             g.detector_origin.x, g.detector_origin.y, g.detector_origin.z,
                             g.detector_u_axis.x, g.detector_u_axis.y, g.detector_u_axis.z,
                             g.detector_v_axis.x, g.detector_v_axis.y, g.detector_v_axis.z,
                             g.pixel_pitch,       g.i0};
    h = detail::fnv1a(nums, sizeof nums, h);
    const int dims[2] = {g.width, g.height};
    return detail::fnv1a(dims, sizeof dims, h);
  };
  return one(setup.view1, one(setup.view0, detail::kFnvOffset));
}

PathLengthMatrix build_path_matrix(const LabelVolume& vol, const BiplanarSetup& setup) {
  validate(setup);
  validate(vol);

  PathLengthMatrix matrix;
  matrix.region_count = static_cast<std::uint16_t>(vol.region_count());
  matrix.volume_hash = content_hash(vol);
  matrix.geometry_hash = setup_hash(setup);

  const ProjectionGeometry* geoms[2] = {&setup.view0, &setup.view1};
  for (int vi = 0; vi < 2; ++vi) {
    const ProjectionGeometry& geom = *geoms[vi];
    PathLengthMatrix::View& view = matrix.views[vi];
    view.width = geom.width;
    view.height = geom.height;
    view.pixel_pitch = geom.pixel_pitch;
    view.i0 = geom.i0;

    const std::size_t npx = view.pixel_count();
    std::vector<RegionLengths> rows(npx);
    parallel_for(npx, 1024, [&](std::size_t p0, std::size_t p1) {
      std::vector<double> acc(vol.region_count(), 0.0);
      for (std::size_t p = p0; p < p1; ++p) {
        const int px = static_cast<int>(p % static_cast<std::size_t>(geom.width));
        const int py = static_cast<int>(p / static_cast<std::size_t>(geom.width));
        std::fill(acc.begin(), acc.end(), 0.0);
        trace_into(vol, ray_for_pixel(geom, px, py), acc);
        collect(acc, rows[p]);
      }
    });

    view.offsets.resize(npx + 1);
    view.offsets[0] = 0;
    for (std::size_t p = 0; p < npx; ++p) {
      view.offsets[p + 1] = view.offsets[p] + rows[p].pairs.size();
    }
    view.region_ids.resize(view.offsets[npx]);
    view.lengths.resize(view.offsets[npx]);
    for (std::size_t p = 0; p < npx; ++p) {
      std::uint64_t at = view.offsets[p];
      for (const RegionSegment& e : rows[p].pairs) {
        view.region_ids[at] = e.region_id;
        view.lengths[at] = e.length;
        ++at;
      }
    }
  }
  return matrix;
}

void dump_path_matrix(const PathLengthMatrix& matrix, const std::string& path) {
  std::string out;
  for (int vi = 0; vi < 2; ++vi) {
    const auto& view = matrix.views[vi];
    for (std::size_t p = 0; p < view.pixel_count(); ++p) {
      detail::json line;
      line["view"] = vi;
      line["px"] = static_cast<int>(p % static_cast<std::size_t>(view.width));
      line["py"] = static_cast<int>(p / static_cast<std::size_t>(view.width));
      auto pairs = detail::json::array();
      for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
        pairs.push_back({view.region_ids[i], view.lengths[i]});
      }
      line["pairs"] = std::move(pairs);
      out += line.dump();
      out += '\n';
    }
  }
  detail::write_file_text(path, out);
}

std::vector<double> total_path_per_region(const PathLengthMatrix& matrix) {
  std::vector<double> totals(matrix.region_count, 0.0);
  for (const auto& view : matrix.views) {
    for (std::size_t i = 0; i < view.region_ids.size(); ++i) {
      totals[view.region_ids[i]] += view.lengths[i];
    }
  }
  return totals;
}

}  // namespace xden

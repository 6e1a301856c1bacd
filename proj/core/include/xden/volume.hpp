// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xden/attenuation.hpp"
#include "xden/math.hpp"

namespace xden {

struct Region {
  std::uint16_t id = 0;
  std::string name;
};

// Part-segmented voxel grid. Region ids are contiguous 0..K with id 0
// reserved for air; labels are stored x-fastest, then y, then z.
struct LabelVolume {
  int nx = 0, ny = 0, nz = 0;
  double voxel_size = 0.0;  // cm, isotropic
  Vec3 origin{};            // center of voxel (0,0,0)
  std::vector<std::uint16_t> labels;
  std::vector<Region> region_table;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(ny) *
                                                   static_cast<std::size_t>(iz));
  }
  std::uint16_t label_at(int ix, int iy, int iz) const { return labels[index(ix, iy, iz)]; }
  Vec3 voxel_center(int ix, int iy, int iz) const {
    return origin + Vec3{ix * voxel_size, iy * voxel_size, iz * voxel_size};
  }
  // K + 1 including air.
  std::size_t region_count() const { return region_table.size(); }
  // Outer extent of the voxel grid (voxel faces, not centers).
  Box bounding_box() const;
};

// Throws ValidationError / ShapeError when the region table is not
// contiguous 0..K with air at 0, a label is missing from the table, or the
// payload size disagrees with dims.
void validate(const LabelVolume& vol);

// Stable digest of dims, scale, labels, and region table; ties a
// PathLengthMatrix to the volume it was traced from.
std::uint64_t content_hash(const LabelVolume& vol);

// Sidecar pair IO ("xden-lvol/1"): <name>.lvol.json + <name>.lvol.raw.
LabelVolume load_volume(const std::string& json_path);
void save_volume(const LabelVolume& vol, const std::string& json_path);

enum class PartShape { sphere, box, cylinder };

// One analytic primitive. Rotation is extrinsic XYZ (Rz*Ry*Rx), applied
// about the part center. Sphere: size.x = radius. Cylinder: size.x = radius,
// size.z = height along local z. Box: size = full edge lengths.
struct PhantomPart {
  PartShape shape = PartShape::sphere;
  Vec3 center{};
  Vec3 rotate_deg{};
  Vec3 size{};
  std::string material;  // Table 1 name; empty when lac is explicit
  double lac = -1.0;     // 1/cm, used when >= 0
  std::string name;      // region name; defaults to material or part index
};

// Centered outer box of extent outer_dims; voxel size is the largest extent
// divided by resolution. Later parts overwrite earlier ones voxel-wise.
struct PhantomSpec {
  Vec3 outer_dims{};
  int resolution = 0;
  std::vector<PhantomPart> parts;
};

// Labels every voxel center analytically and returns the ground-truth
// attenuation vector (Table 1 lookup or explicit LACs). Deterministic:
// identical spec gives identical bytes.
std::pair<LabelVolume, AttenuationVector> make_phantom(const PhantomSpec& spec);

// JSON document IO ("xden-phantom/1").
PhantomSpec load_phantom_spec(const std::string& path);

}  // namespace xden

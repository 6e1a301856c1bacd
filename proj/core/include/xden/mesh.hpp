// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "xden/math.hpp"
#include "xden/volume.hpp"

namespace xden {

// Part-labeled triangle soup. Labels are 1-based; part_names[label-1] names
// the part. Each part's surface must be watertight for voxelization.
struct TriangleMesh {
  std::vector<Vec3> vertices;                         // cm
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::uint16_t> part_label;              // per triangle
  std::vector<std::string> part_names;

  bool empty() const { return triangles.empty(); }
};

// Throws ValidationError on out-of-range indices or label/name mismatches.
void validate(const TriangleMesh& mesh);

// ASCII OBJ reader. Each `o`/`g` group becomes one part; faces are
// fan-triangulated; `v`/`f` records only, everything else is skipped.
TriangleMesh load_obj(const std::string& path);

// Labels every voxel center by parity ray casting along the three axes with
// a majority vote. Overlaps go to the part covering the fewest voxels (the
// innermost). A part whose three parities disagree on more than 0.1% of its
// voxels raises NonWatertightError naming the part.
LabelVolume voxelize_mesh(const TriangleMesh& mesh, double voxel_size);

}  // namespace xden

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "xden/geometry.hpp"
#include "xden/volume.hpp"

namespace xden {

// Sparse per-region path lengths for one ray, ascending region id. Region 0
// (air inside the bounding box) is included when nonzero, so the entries sum
// to the ray's chord through the box.
struct RegionSegment {
  std::uint16_t region_id = 0;
  double length = 0.0;  // cm
};

struct RegionLengths {
  std::vector<RegionSegment> pairs;

  double total() const {
    double s = 0.0;
    for (const RegionSegment& e : pairs) s += e.length;
    return s;
  }
};

// Exact parametric traversal of the label grid: the ray is clipped to the
// volume's bounding box and each boundary-to-boundary segment accumulates
// into its voxel's region bucket. Intervals are half-open [t_enter, t_exit),
// and segments shorter than 1e-12 cm are dropped. A ray missing the box
// returns an empty list.
RegionLengths trace_region_lengths(const LabelVolume& vol, const Ray& ray);

// ell[view][pixel][region] in compressed sparse rows, one row per pixel.
struct PathLengthMatrix {
  struct View {
    int width = 0;
    int height = 0;
    double pixel_pitch = 0.0;
    double i0 = 1.0;
    std::vector<std::uint64_t> offsets;       // size width*height + 1
    std::vector<std::uint16_t> region_ids;
    std::vector<double> lengths;              // cm

    std::size_t pixel_count() const {
      return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
  };

  std::array<View, 2> views;
  std::uint16_t region_count = 0;  // K+1 including air
  std::uint64_t volume_hash = 0;
  std::uint64_t geometry_hash = 0;
};

// Traces every pixel of both views. Deterministic for any worker count.
PathLengthMatrix build_path_matrix(const LabelVolume& vol, const BiplanarSetup& setup);

std::uint64_t setup_hash(const BiplanarSetup& setup);

// Debug dump, one JSON object per line:
// {"view":i,"px":x,"py":y,"pairs":[[id,len],...]}
void dump_path_matrix(const PathLengthMatrix& matrix, const std::string& path);

// Sum of every pixel's bucket for one region across both views; the
// identifiability measure.
std::vector<double> total_path_per_region(const PathLengthMatrix& matrix);

}  // namespace xden

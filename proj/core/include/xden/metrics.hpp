// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "xden/recon.hpp"
#include "xden/volume.hpp"
#include "xden/xray.hpp"

namespace xden {

struct MapeReport {
  double mape = 0.0;             // mean of |pred - ref| / ref over the mask
  std::size_t masked_voxels = 0; // voxels that entered the mean
  std::size_t excluded_nan = 0;  // NaN voxels skipped and counted
};

// Nonzero mask entries select voxels. Throws ShapeError on dim or scale
// mismatch and ValidationError when ref is zero or negative inside the mask
// (the message counts the offending voxels).
MapeReport voxel_mape(const DensityField& pred, const DensityField& ref,
                      const std::vector<std::uint8_t>& mask);

// Every non-air voxel; percentage error against air's near-zero density is
// meaningless.
std::vector<std::uint8_t> non_air_mask(const LabelVolume& vol);
std::vector<std::uint8_t> region_mask(const LabelVolume& vol, std::uint16_t region_id);

// Root mean squared intensity difference. Throws ShapeError on dim mismatch.
double projection_rmse(const XRayImage& a, const XRayImage& b);

}  // namespace xden

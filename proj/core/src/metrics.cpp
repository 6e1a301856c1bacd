// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/metrics.hpp"

#include <cmath>

#include "fmt.hpp"
#include "xden/errors.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

MapeReport voxel_mape(const DensityField& pred, const DensityField& ref,
                      const std::vector<std::uint8_t>& mask) {
  if (pred.nx != ref.nx || pred.ny != ref.ny || pred.nz != ref.nz) {
    throw ShapeError(fmt("pred dims (%d,%d,%d) differ from ref (%d,%d,%d)", pred.nx, pred.ny,
                         pred.nz, ref.nx, ref.ny, ref.nz));
  }
  if (pred.voxel_size != ref.voxel_size) {
    throw ShapeError(fmt("pred voxel_size %g differs from ref %g", pred.voxel_size,
                         ref.voxel_size));
  }
  if (mask.size() != pred.voxel_count()) {
    throw ShapeError(fmt("mask holds %zu voxels, fields hold %zu", mask.size(),
                         pred.voxel_count()));
  }

  std::size_t bad_ref = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && !std::isnan(ref.rho[i]) && !(ref.rho[i] > 0.0)) ++bad_ref;
  }
  if (bad_ref > 0) {
    throw ValidationError(fmt("reference holds %zu zero/negative voxels inside the mask; "
                              "percentage error is undefined there",
                              bad_ref));
  }

  struct Acc {
    double sum = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
  };
  const Acc total = parallel_reduce<Acc>(
      mask.size(), 65536, Acc{},
      [&](std::size_t i0, std::size_t i1) {
        Acc acc;
        for (std::size_t i = i0; i < i1; ++i) {
          if (!mask[i]) continue;
          if (std::isnan(pred.rho[i]) || std::isnan(ref.rho[i])) {
            ++acc.skipped;
            continue;
          }
          acc.sum += std::abs(pred.rho[i] - ref.rho[i]) / ref.rho[i];
          ++acc.used;
        }
        return acc;
      },
      [](Acc a, const Acc& b) {
        a.sum += b.sum;
        a.used += b.used;
        a.skipped += b.skipped;
        return a;
      });

  MapeReport report;
  report.masked_voxels = total.used;
  report.excluded_nan = total.skipped;
  report.mape = total.used == 0 ? 0.0 : total.sum / static_cast<double>(total.used);
  return report;
}

std::vector<std::uint8_t> non_air_mask(const LabelVolume& vol) {
  std::vector<std::uint8_t> mask(vol.voxel_count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = vol.labels[i] != 0;
  return mask;
}

std::vector<std::uint8_t> region_mask(const LabelVolume& vol, std::uint16_t region_id) {
  std::vector<std::uint8_t> mask(vol.voxel_count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = vol.labels[i] == region_id;
  return mask;
}

double projection_rmse(const XRayImage& a, const XRayImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeError(fmt("image dims (%d,%d) differ from (%d,%d)", a.width, a.height, b.width,
                         b.height));
  }
  const double sum = parallel_reduce<double>(
      a.pixel_count(), 65536, 0.0,
      [&](std::size_t i0, std::size_t i1) {
        double s = 0.0;
        for (std::size_t i = i0; i < i1; ++i) {
          const double d = a.intensities[i] - b.intensities[i];
          s += d * d;
        }
        return s;
      },
      [](double x, double y) { return x + y; });
  return std::sqrt(sum / static_cast<double>(a.pixel_count()));
}

}  // namespace xden

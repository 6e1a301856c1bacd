// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xden/attenuation.hpp"
#include "xden/raytrace.hpp"

namespace xden {

// Detector intensities, row-major. Values are dimensionless relative to the
// air-scan reference i0. Computation is 64-bit; files store 32-bit.
struct XRayImage {
  int width = 0;
  int height = 0;
  std::vector<double> intensities;  // size width*height, all >= 0 and finite
  double i0 = 1.0;
  double pixel_pitch = 0.0;  // cm

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  double at(int px, int py) const {
    return intensities[static_cast<std::size_t>(py) * width + px];
  }
};

// Log-projection values p = -ln(I/i0); unlike intensities these may be
// negative when noise pushes I above i0.
struct ProjectionImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  double pixel_pitch = 0.0;

  double at(int px, int py) const {
    return values[static_cast<std::size_t>(py) * width + px];
  }
};

void validate(const XRayImage& img);

// i0 * exp(-sum_k mu_k * ell_k). Throws std::out_of_range when a region id
// is not covered by mu.
double simulate_pixel(const RegionLengths& lengths, const AttenuationVector& mu, double i0);

// Applies simulate_pixel to every pixel of both views.
// Throws ShapeError when matrix.region_count != mu.region_count().
std::pair<XRayImage, XRayImage> render(const PathLengthMatrix& matrix,
                                       const AttenuationVector& mu);

// Throws SaturationError naming the first nonpositive pixel (row-major scan).
ProjectionImage to_projection(const XRayImage& img);

// Each pixel becomes Poisson(I*n)/n with its own seed-derived stream, so the
// same (image, n, seed) always yields identical bytes.
XRayImage add_poisson_noise(const XRayImage& img, double photons_per_unit_intensity,
                            std::uint64_t seed);

// Sidecar pair IO ("xden-xri/1"): <name>.xri.json + <name>.xri.raw (f32le).
XRayImage load_image(const std::string& json_path);
void save_image(const XRayImage& img, const std::string& json_path);

}  // namespace xden

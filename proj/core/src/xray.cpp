// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/xray.hpp"

#include <cmath>
#include <stdexcept>

#include "fmt.hpp"
#include "json_util.hpp"
#include "rng.hpp"
#include "xden/errors.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

void validate(const XRayImage& img) {
  if (img.width < 1 || img.height < 1) {
    throw ValidationError(fmt("image dims (%d,%d) must each be >= 1", img.width, img.height));
  }
  if (img.intensities.size() != img.pixel_count()) {
    throw ShapeError(fmt("image payload holds %zu pixels, dims say %zu", img.intensities.size(),
                         img.pixel_count()));
  }
  if (!(img.i0 > 0.0)) throw ValidationError("i0 must be > 0");
  for (std::size_t i = 0; i < img.intensities.size(); ++i) {
    const double v = img.intensities[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(fmt("pixel %zu holds non-physical intensity %g", i, v));
    }
  }
}

double simulate_pixel(const RegionLengths& lengths, const AttenuationVector& mu, double i0) {
  double s = 0.0;
  for (const RegionSegment& e : lengths.pairs) {
    if (e.region_id >= mu.region_count()) {
      throw std::out_of_range(fmt("region id %u not covered by a %zu-entry attenuation vector",
                                  e.region_id, mu.region_count()));
    }
    s += mu.mu[e.region_id] * e.length;
  }
  return i0 * std::exp(-s);
}

namespace {

XRayImage render_view(const PathLengthMatrix::View& view, const AttenuationVector& mu) {
  XRayImage img;
  img.width = view.width;
  img.height = view.height;
  img.i0 = view.i0;
  img.pixel_pitch = view.pixel_pitch;
  img.intensities.resize(view.pixel_count());
  parallel_for(view.pixel_count(), 4096, [&](std::size_t p0, std::size_t p1) {
    for (std::size_t p = p0; p < p1; ++p) {
      double s = 0.0;
      for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
        s += mu.mu[view.region_ids[i]] * view.lengths[i];
      }
      img.intensities[p] = view.i0 * std::exp(-s);
    }
  });
  return img;
}

}  // namespace

std::pair<XRayImage, XRayImage> render(const PathLengthMatrix& matrix,
                                       const AttenuationVector& mu) {
  if (matrix.region_count != mu.region_count()) {
    throw ShapeError(fmt("matrix has %u regions, attenuation vector has %zu",
                         matrix.region_count, mu.region_count()));
  }
  validate(mu);
  return {render_view(matrix.views[0], mu), render_view(matrix.views[1], mu)};
}

ProjectionImage to_projection(const XRayImage& img) {
  validate(img);
  ProjectionImage out;
  out.width = img.width;
  out.height = img.height;
  out.pixel_pitch = img.pixel_pitch;
  out.values.resize(img.pixel_count());
  for (std::size_t p = 0; p < img.intensities.size(); ++p) {
    if (!(img.intensities[p] > 0.0)) {
      const int px = static_cast<int>(p % static_cast<std::size_t>(img.width));
      const int py = static_cast<int>(p / static_cast<std::size_t>(img.width));
      throw SaturationError(
          fmt("pixel (%d,%d) intensity %g: log projection undefined (opaque ray)", px, py,
              img.intensities[p]),
          px, py);
    }
    out.values[p] = -std::log(img.intensities[p] / img.i0);
  }
  return out;
}

XRayImage add_poisson_noise(const XRayImage& img, double photons_per_unit_intensity,
                            std::uint64_t seed) {
  if (!(photons_per_unit_intensity > 0.0)) {
    throw ValidationError(fmt("photons_per_unit_intensity %g must be > 0",
                              photons_per_unit_intensity));
  }
  validate(img);
  XRayImage out = img;
  const double n = photons_per_unit_intensity;
  parallel_for(img.pixel_count(), 4096, [&](std::size_t p0, std::size_t p1) {
    for (std::size_t p = p0; p < p1; ++p) {
      detail::SplitMix64 rng{detail::mix_seed(seed, p)};
      const double lambda = img.intensities[p] * n;
      out.intensities[p] = static_cast<double>(detail::poisson_sample(lambda, rng)) / n;
    }
  });
  return out;
}

XRayImage load_image(const std::string& json_path) {
  const auto doc = detail::parse_json_file(json_path);
  const std::string schema = detail::require_string(doc, "schema", json_path);
  if (schema != "xden-xri/1") {
    throw ValidationError(
        fmt("%s: schema \"%s\" is not xden-xri/1", json_path.c_str(), schema.c_str()));
  }
  XRayImage img;
  img.width = static_cast<int>(detail::require_int(doc, "width", json_path));
  img.height = static_cast<int>(detail::require_int(doc, "height", json_path));
  img.pixel_pitch = detail::require_number(doc, "pixel_pitch_cm", json_path);
  img.i0 = detail::require_number(doc, "i0", json_path);
  const std::string dtype = detail::require_string(doc, "dtype", json_path);
  const std::string order = detail::require_string(doc, "order", json_path);
  if (dtype != "f32le" || order != "row-major") {
    throw ValidationError(fmt("%s: expected dtype f32le, order row-major", json_path.c_str()));
  }
  if (img.width < 1 || img.height < 1) {
    throw ValidationError(
        fmt("%s: dims (%d,%d) must each be >= 1", json_path.c_str(), img.width, img.height));
  }
  const auto raw = detail::read_raw_f32(detail::sidecar_raw_path(json_path), img.pixel_count());
  img.intensities.assign(raw.begin(), raw.end());
  validate(img);
  return img;
}

void save_image(const XRayImage& img, const std::string& json_path) {
  validate(img);
  detail::json doc;
  doc["schema"] = "xden-xri/1";
  doc["width"] = img.width;
  doc["height"] = img.height;
  doc["pixel_pitch_cm"] = img.pixel_pitch;
  doc["i0"] = img.i0;
  doc["dtype"] = "f32le";
  doc["order"] = "row-major";
  detail::write_json_file(json_path, doc);
  std::vector<float> raw(img.intensities.begin(), img.intensities.end());
  detail::write_raw_f32(detail::sidecar_raw_path(json_path), raw);
}

}  // namespace xden

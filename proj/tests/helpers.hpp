// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "xden/geometry.hpp"
#include "xden/recon.hpp"
#include "xden/volume.hpp"

namespace xtest {

// Independent slab clip; returns false on a miss. Entry clamped to 0 like
// the traversal under test, so chords measure forward travel only.
inline bool slab_clip(const xden::Box& box, const xden::Ray& ray, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1e300;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin.at(a);
    const double d = ray.direction.at(a);
    const double lo = box.min.at(a);
    const double hi = box.max.at(a);
    if (d == 0.0) {
      if (o < lo || o >= hi) return false;
      continue;
    }
    double ta = (lo - o) / d;
    double tb = (hi - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 < t1;
}

inline double slab_chord(const xden::Box& box, const xden::Ray& ray) {
  double t0, t1;
  return slab_clip(box, ray, t0, t1) ? t1 - t0 : 0.0;
}

// Brute-force per-region lengths: march at `step`, locate label changes by
// bisection between disagreeing sample midpoints. Misses only sub-step
// slivers where a ray clips a voxel corner.
inline std::vector<double> fine_step_lengths(const xden::LabelVolume& vol, const xden::Ray& ray,
                                             double step) {
  std::vector<double> acc(vol.region_count(), 0.0);
  const xden::Box box = vol.bounding_box();
  double t0, t1;
  if (!slab_clip(box, ray, t0, t1)) return acc;

  auto label_at = [&](double t) {
    const xden::Vec3 p = ray.origin + ray.direction * t;
    auto idx = [&](double coord, double lo, int n) {
      int i = static_cast<int>(std::floor((coord - lo) / vol.voxel_size));
      return std::clamp(i, 0, n - 1);
    };
    return vol.label_at(idx(p.x, box.min.x, vol.nx), idx(p.y, box.min.y, vol.ny),
                        idx(p.z, box.min.z, vol.nz));
  };

  const std::size_t n = static_cast<std::size_t>(std::ceil((t1 - t0) / step));
  double cut = t0;
  double prev_mid = t0 + 0.5 * std::min(step, t1 - t0);
  std::uint16_t prev_label = label_at(prev_mid);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo_t = t0 + i * step;
    const double mid = lo_t + 0.5 * std::min(step, t1 - lo_t);
    const std::uint16_t label = label_at(mid);
    if (label != prev_label) {
      double a = prev_mid, b = mid;
      for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        (label_at(m) == prev_label ? a : b) = m;
      }
      const double boundary = 0.5 * (a + b);
      acc[prev_label] += boundary - cut;
      cut = boundary;
      prev_label = label;
    }
    prev_mid = mid;
  }
  acc[prev_label] += t1 - cut;
  return acc;
}

// Central finite differences of the objective over the free entries of mu,
// matching the layout of xden::gradient.
inline std::vector<double> fd_gradient(xden::AttenuationVector mu,
                                       const xden::PathLengthMatrix& matrix,
                                       const std::pair<xden::XRayImage, xden::XRayImage>& measured,
                                       xden::LossDomain domain, double h = 1e-6) {
  std::vector<double> grad;
  for (std::size_t k = mu.air_fixed ? 1 : 0; k < mu.region_count(); ++k) {
    const double save = mu.mu[k];
    mu.mu[k] = save + h;
    const double fp = xden::objective(mu, matrix, measured, domain);
    mu.mu[k] = save - h;
    const double fm = xden::objective(mu, matrix, measured, domain);
    mu.mu[k] = save;
    grad.push_back((fp - fm) / (2.0 * h));
  }
  return grad;
}

// Randomized multi-part phantom; later parts overwrite earlier ones, so
// buried parts may end up with zero voxels (and zero path length).
inline xden::PhantomSpec random_phantom_spec(std::mt19937_64& rng, int part_count,
                                             double outer = 12.0, int resolution = 128) {
  static const char* kSolids[] = {"Water",       "Glass", "Plastic-PP", "Plastic-PVC",
                                  "Rubber",      "Wood",  "Aluminum"};
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  xden::PhantomSpec spec;
  spec.outer_dims = {outer, outer, outer};
  spec.resolution = resolution;
  for (int i = 0; i < part_count; ++i) {
    xden::PhantomPart part;
    part.center = {in(-0.22, 0.22) * outer, in(-0.22, 0.22) * outer, in(-0.22, 0.22) * outer};
    part.rotate_deg = {in(0, 360), in(0, 360), in(0, 360)};
    part.material = kSolids[static_cast<std::size_t>(u01(rng) * 6.999)];
    part.name = part.material + std::string("-") + std::to_string(i + 1);
    switch (static_cast<int>(u01(rng) * 2.999)) {
      case 0:
        part.shape = xden::PartShape::sphere;
        part.size = {in(0.08, 0.22) * outer, 0, 0};
        break;
      case 1:
        part.shape = xden::PartShape::box;
        part.size = {in(0.1, 0.35) * outer, in(0.1, 0.35) * outer, in(0.1, 0.35) * outer};
        break;
      default:
        part.shape = xden::PartShape::cylinder;
        part.size = {in(0.07, 0.18) * outer, 0, in(0.15, 0.4) * outer};
        break;
    }
    spec.parts.push_back(std::move(part));
  }
  return spec;
}

// Density field with an analytic inside test; rho_out fills the rest.
template <class Inside>
inline xden::DensityField analytic_density(int n, double extent, Inside inside, double rho_in,
                                           double rho_out = 0.0) {
  xden::DensityField field;
  field.nx = field.ny = field.nz = n;
  field.voxel_size = extent / n;
  const double half = 0.5 * (n - 1) * field.voxel_size;
  field.origin = {-half, -half, -half};
  field.rho.resize(field.voxel_count());
  std::size_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++i) {
        field.rho[i] = inside(field.voxel_center(ix, iy, iz)) ? rho_in : rho_out;
      }
    }
  }
  return field;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("xden_" + tag + "_" + std::to_string(++counter) + "_" +
             std::to_string(static_cast<unsigned>(::getpid())));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_bytes(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string data;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, got);
  std::fclose(f);
  return data;
}

}  // namespace xtest

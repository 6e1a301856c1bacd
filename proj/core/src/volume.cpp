// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fmt.hpp"
#include "hash.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"
#include "xden/materials.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

Box LabelVolume::bounding_box() const {
  const double h = voxel_size;
  const Vec3 lo = origin - Vec3{h / 2, h / 2, h / 2};
  return Box{lo, lo + Vec3{nx * h, ny * h, nz * h}};
}

void validate(const LabelVolume& vol) {
  if (!(vol.voxel_size > 0.0)) throw ValidationError("voxel_size must be > 0");
  if (vol.nx < 1 || vol.ny < 1 || vol.nz < 1) {
    throw ValidationError(fmt("dims (%d,%d,%d) must each be >= 1", vol.nx, vol.ny, vol.nz));
  }
  if (vol.labels.size() != vol.voxel_count()) {
    throw ShapeError(fmt("label payload holds %zu voxels, dims say %zu", vol.labels.size(),
                         vol.voxel_count()));
  }
  if (vol.region_table.empty() || vol.region_table[0].id != 0 ||
      vol.region_table[0].name != "air") {
    throw ValidationError("region_table must start with {0, \"air\"}");
  }
  for (std::size_t i = 0; i < vol.region_table.size(); ++i) {
    if (vol.region_table[i].id != i) {
      throw ValidationError(fmt("region ids must be contiguous 0..K; slot %zu holds id %u", i,
                                vol.region_table[i].id));
    }
  }
  const auto k_plus_1 = static_cast<std::uint16_t>(vol.region_table.size());
  for (std::size_t i = 0; i < vol.labels.size(); ++i) {
    if (vol.labels[i] >= k_plus_1) {
      throw ValidationError(
          fmt("voxel %zu has label %u outside the region table (K+1 = %u)", i, vol.labels[i],
              k_plus_1));
    }
  }
}

std::uint64_t content_hash(const LabelVolume& vol) {
  std::uint64_t h = detail::kFnvOffset;
  auto mix = [&h](const void* p, std::size_t n) { h = detail::fnv1a(p, n, h); };
  const std::int64_t dims[3] = {vol.nx, vol.ny, vol.nz};
  mix(dims, sizeof dims);
  mix(&vol.voxel_size, sizeof vol.voxel_size);
  const double o[3] = {vol.origin.x, vol.origin.y, vol.origin.z};
  mix(o, sizeof o);
  mix(vol.labels.data(), vol.labels.size() * sizeof(std::uint16_t));
  for (const Region& r : vol.region_table) {
    mix(&r.id, sizeof r.id);
    mix(r.name.data(), r.name.size());
  }
  return h;
}

LabelVolume load_volume(const std::string& json_path) {
  const auto doc = detail::parse_json_file(json_path);
  const std::string schema = detail::require_string(doc, "schema", json_path);
  if (schema != "xden-lvol/1") {
    throw ValidationError(
        fmt("%s: schema \"%s\" is not xden-lvol/1", json_path.c_str(), schema.c_str()));
  }
  LabelVolume vol;
  const auto& dims = detail::require_array(doc, "dims", 3, json_path);
  vol.nx = dims[0].get<int>();
  vol.ny = dims[1].get<int>();
  vol.nz = dims[2].get<int>();
  vol.voxel_size = detail::require_number(doc, "voxel_size_cm", json_path);
  const auto& org = detail::require_array(doc, "origin_cm", 3, json_path);
  vol.origin = Vec3{org[0].get<double>(), org[1].get<double>(), org[2].get<double>()};
  const std::string dtype = detail::require_string(doc, "dtype", json_path);
  const std::string order = detail::require_string(doc, "order", json_path);
  if (dtype != "u16le" || order != "x-fastest") {
    throw ValidationError(fmt("%s: expected dtype u16le, order x-fastest", json_path.c_str()));
  }
  const auto& regions = detail::require_array(doc, "regions", 0, json_path);
  for (const auto& r : regions) {
    Region reg;
    reg.id = static_cast<std::uint16_t>(detail::require_int(r, "id", json_path));
    reg.name = detail::require_string(r, "name", json_path);
    vol.region_table.push_back(std::move(reg));
  }
  if (vol.nx < 1 || vol.ny < 1 || vol.nz < 1) {
    throw ValidationError(
        fmt("%s: dims (%d,%d,%d) must each be >= 1", json_path.c_str(), vol.nx, vol.ny, vol.nz));
  }
  vol.labels = detail::read_raw_u16(detail::sidecar_raw_path(json_path), vol.voxel_count());
  validate(vol);
  return vol;
}

void save_volume(const LabelVolume& vol, const std::string& json_path) {
  validate(vol);
  detail::json doc;
  doc["schema"] = "xden-lvol/1";
  doc["dims"] = {vol.nx, vol.ny, vol.nz};
  doc["voxel_size_cm"] = vol.voxel_size;
  doc["origin_cm"] = {vol.origin.x, vol.origin.y, vol.origin.z};
  doc["dtype"] = "u16le";
  doc["order"] = "x-fastest";
  auto regions = detail::json::array();
  for (const Region& r : vol.region_table) {
    regions.push_back({{"id", r.id}, {"name", r.name}});
  }
  doc["regions"] = std::move(regions);
  detail::write_json_file(json_path, doc);
  detail::write_raw_u16(detail::sidecar_raw_path(json_path), vol.labels);
}

namespace {

struct PreparedPart {
  PartShape shape;
  Vec3 center;
  Mat3 rot_t;  // world-to-local
  Vec3 size;
  std::uint16_t label;
};

bool inside(const PreparedPart& part, const Vec3& p) {
  const Vec3 local = part.rot_t * (p - part.center);
  switch (part.shape) {
    case PartShape::sphere: {
      const double r = part.size.x;
      return local.dot(local) <= r * r;
    }
    case PartShape::box:
      return std::abs(local.x) <= part.size.x / 2 && std::abs(local.y) <= part.size.y / 2 &&
             std::abs(local.z) <= part.size.z / 2;
    case PartShape::cylinder: {
      const double r = part.size.x;
      return local.x * local.x + local.y * local.y <= r * r &&
             std::abs(local.z) <= part.size.z / 2;
    }
  }
  return false;
}

Mat3 euler_xyz(const Vec3& deg) {
  const Mat3 rx = Mat3::rotation(Vec3{1, 0, 0}, deg_to_rad(deg.x));
  const Mat3 ry = Mat3::rotation(Vec3{0, 1, 0}, deg_to_rad(deg.y));
  const Mat3 rz = Mat3::rotation(Vec3{0, 0, 1}, deg_to_rad(deg.z));
  return rz * (ry * rx);
}

void check_part(const PhantomPart& part, std::size_t idx) {
  auto bad = [&](const char* what) {
    throw ValidationError(fmt("part %zu: %s", idx, what));
  };
  switch (part.shape) {
    case PartShape::sphere:
      if (!(part.size.x > 0.0)) bad("sphere radius must be > 0");
      break;
    case PartShape::box:
      if (!(part.size.x > 0.0) || !(part.size.y > 0.0) || !(part.size.z > 0.0)) {
        bad("box sizes must be > 0");
      }
      break;
    case PartShape::cylinder:
      if (!(part.size.x > 0.0) || !(part.size.z > 0.0)) {
        bad("cylinder radius and height must be > 0");
      }
      break;
  }
  if (part.material.empty() && !(part.lac >= 0.0)) {
    bad("needs a material name or an explicit lac >= 0");
  }
}

}  // namespace

std::pair<LabelVolume, AttenuationVector> make_phantom(const PhantomSpec& spec) {
  if (spec.parts.empty()) throw ValidationError("phantom needs at least one part");
  if (spec.resolution < 1) throw ValidationError("resolution must be >= 1");
  if (!(spec.outer_dims.x > 0.0) || !(spec.outer_dims.y > 0.0) || !(spec.outer_dims.z > 0.0)) {
    throw ValidationError("outer_dims must be positive");
  }

  LabelVolume vol;
  const double max_extent =
      std::max({spec.outer_dims.x, spec.outer_dims.y, spec.outer_dims.z});
  const double h = max_extent / spec.resolution;
  auto count = [h](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
  };
  vol.nx = count(spec.outer_dims.x);
  vol.ny = count(spec.outer_dims.y);
  vol.nz = count(spec.outer_dims.z);
  vol.voxel_size = h;
  vol.origin = Vec3{-(vol.nx - 1) * h / 2, -(vol.ny - 1) * h / 2, -(vol.nz - 1) * h / 2};
  vol.labels.assign(vol.voxel_count(), 0);
  vol.region_table.push_back({0, "air"});

  AttenuationVector mu = AttenuationVector::for_regions(spec.parts.size() + 1);

  std::vector<PreparedPart> prepared;
  prepared.reserve(spec.parts.size());
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const PhantomPart& part = spec.parts[i];
    check_part(part, i);
    const auto label = static_cast<std::uint16_t>(i + 1);
    prepared.push_back({part.shape, part.center, euler_xyz(part.rotate_deg).transposed(),
                        part.size, label});
    std::string name = part.name;
    if (name.empty()) name = part.material.empty() ? fmt("part-%zu", i + 1) : part.material;
    vol.region_table.push_back({label, std::move(name)});
    if (part.lac >= 0.0) {
      mu.mu[label] = part.lac;
    } else {
      const Material* m = find_material(builtin_table(), part.material);
      if (!m) {
        throw ValidationError(fmt("part %zu: unknown material \"%s\"", i, part.material.c_str()));
      }
      mu.mu[label] = m->lac;
    }
  }

  // Paint order resolves nesting: the last part containing a center wins.
  const std::size_t slab = static_cast<std::size_t>(vol.nx) * static_cast<std::size_t>(vol.ny);
  parallel_for(static_cast<std::size_t>(vol.nz), 1, [&](std::size_t z0, std::size_t z1) {
    for (std::size_t iz = z0; iz < z1; ++iz) {
      std::size_t at = iz * slab;
      for (int iy = 0; iy < vol.ny; ++iy) {
        for (int ix = 0; ix < vol.nx; ++ix, ++at) {
          const Vec3 p = vol.voxel_center(ix, iy, static_cast<int>(iz));
          for (std::size_t pi = prepared.size(); pi-- > 0;) {
            if (inside(prepared[pi], p)) {
              vol.labels[at] = prepared[pi].label;
              break;
            }
          }
        }
      }
    }
  });

  validate(vol);
  validate(mu);
  return {std::move(vol), std::move(mu)};
}

namespace {

PartShape shape_from_string(const std::string& s, const std::string& origin) {
  if (s == "sphere") return PartShape::sphere;
  if (s == "box") return PartShape::box;
  if (s == "cylinder") return PartShape::cylinder;
  throw ValidationError(
      fmt("%s: unknown shape \"%s\" (sphere|box|cylinder)", origin.c_str(), s.c_str()));
}

Vec3 vec_from(const detail::json& arr) {
  return Vec3{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

PhantomSpec load_phantom_spec(const std::string& path) {
  const auto doc = detail::parse_json_file(path);
  const std::string schema = detail::require_string(doc, "schema", path);
  if (schema != "xden-phantom/1") {
    throw ValidationError(
        fmt("%s: schema \"%s\" is not xden-phantom/1", path.c_str(), schema.c_str()));
  }
  PhantomSpec spec;
  spec.outer_dims = vec_from(detail::require_array(doc, "outer_dims_cm", 3, path));
  spec.resolution = static_cast<int>(detail::require_int(doc, "resolution", path));
  const auto& parts = detail::require_array(doc, "parts", 0, path);
  std::size_t idx = 0;
  for (const auto& p : parts) {
    const std::string origin = fmt("%s parts[%zu]", path.c_str(), idx++);
    PhantomPart part;
    part.shape = shape_from_string(detail::require_string(p, "shape", origin), origin);
    part.center = vec_from(detail::require_array(p, "center_cm", 3, origin));
    if (p.contains("rotate_deg")) {
      part.rotate_deg = vec_from(detail::require_array(p, "rotate_deg", 3, origin));
    }
    switch (part.shape) {
      case PartShape::sphere:
        part.size.x = detail::require_number(p, "radius_cm", origin);
        break;
      case PartShape::cylinder:
        part.size.x = detail::require_number(p, "radius_cm", origin);
        part.size.z = detail::require_number(p, "height_cm", origin);
        break;
      case PartShape::box:
        part.size = vec_from(detail::require_array(p, "size_cm", 3, origin));
        break;
    }
    if (p.contains("material")) part.material = detail::require_string(p, "material", origin);
    if (p.contains("lac")) part.lac = detail::require_number(p, "lac", origin);
    if (p.contains("name")) part.name = detail::require_string(p, "name", origin);
    if (part.material.empty() && !(part.lac >= 0.0)) {
      throw ValidationError(fmt("%s: needs \"material\" or \"lac\"", origin.c_str()));
    }
    spec.parts.push_back(std::move(part));
  }
  return spec;
}

}  // namespace xden

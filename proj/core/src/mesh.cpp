// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fmt.hpp"
#include "xden/errors.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

void validate(const TriangleMesh& mesh) {
  if (mesh.part_label.size() != mesh.triangles.size()) {
    throw ValidationError(fmt("mesh has %zu triangles but %zu part labels",
                              mesh.triangles.size(), mesh.part_label.size()));
  }
  for (const auto& tri : mesh.triangles) {
    for (std::uint32_t idx : tri) {
      if (idx >= mesh.vertices.size()) {
        throw ValidationError(fmt("triangle vertex index %u out of range (%zu vertices)", idx,
                                  mesh.vertices.size()));
      }
    }
  }
  for (std::uint16_t label : mesh.part_label) {
    if (label == 0 || label > mesh.part_names.size()) {
      throw ValidationError(fmt("part label %u outside 1..%zu", label, mesh.part_names.size()));
    }
  }
  for (const std::string& name : mesh.part_names) {
    if (name.empty()) throw ValidationError("mesh part with empty name");
  }
}

namespace {

struct ObjIndex {
  long v = 0;
};

long parse_obj_index(const std::string& token, std::size_t vertex_count,
                     const std::string& origin, int line_no) {
  // "3", "3/1", "3//2", "3/1/2"; negatives count back from the end.
  const std::size_t slash = token.find('/');
  const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
  long idx = 0;
  try {
    idx = std::stol(head);
  } catch (const std::exception&) {
    throw ValidationError(fmt("%s:%d: bad face index \"%s\"", origin.c_str(), line_no,
                              token.c_str()));
  }
  if (idx < 0) idx = static_cast<long>(vertex_count) + idx + 1;
  if (idx < 1 || idx > static_cast<long>(vertex_count)) {
    throw ValidationError(fmt("%s:%d: face index %s out of range", origin.c_str(), line_no,
                              token.c_str()));
  }
  return idx - 1;
}

}  // namespace

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt("cannot open %s", path.c_str()));

  TriangleMesh mesh;
  std::uint16_t current_part = 0;  // 0 = no group seen yet

  auto part_for = [&mesh](const std::string& name) -> std::uint16_t {
    for (std::size_t i = 0; i < mesh.part_names.size(); ++i) {
      if (mesh.part_names[i] == name) return static_cast<std::uint16_t>(i + 1);
    }
    mesh.part_names.push_back(name);
    return static_cast<std::uint16_t>(mesh.part_names.size());
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x >> v.y >> v.z)) {
        throw ValidationError(fmt("%s:%d: malformed vertex", path.c_str(), line_no));
      }
      mesh.vertices.push_back(v);
    } else if (tag == "o" || tag == "g") {
      std::string name;
      ss >> name;
      if (name.empty()) name = fmt("part-%zu", mesh.part_names.size() + 1);
      current_part = part_for(name);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string token;
      while (ss >> token) {
        idx.push_back(parse_obj_index(token, mesh.vertices.size(), path, line_no));
      }
      if (idx.size() < 3) {
        throw ValidationError(fmt("%s:%d: face needs at least 3 vertices", path.c_str(),
                                  line_no));
      }
      if (current_part == 0) current_part = part_for("default");
      for (std::size_t i = 1; i + 1 < idx.size(); ++i) {
        mesh.triangles.push_back({static_cast<std::uint32_t>(idx[0]),
                                  static_cast<std::uint32_t>(idx[i]),
                                  static_cast<std::uint32_t>(idx[i + 1])});
        mesh.part_label.push_back(current_part);
      }
    }
    // vn/vt/usemtl/s/mtllib carry no geometry here.
  }
  validate(mesh);
  return mesh;
}

namespace {

// One parity pass along a single axis for one part's triangles.
// axis w is the casting direction; (u,v) are the other two axes.
struct AxisCaster {
  int axis;             // 0,1,2 -> cast along x,y,z
  int ua, va;           // component indices of u and v
  int nu, nv, nw;       // grid dims along u, v, w
  double h;
  Vec3 origin;          // voxel (0,0,0) center

  double ucoord(const Vec3& p) const { return p.at(ua); }
  double vcoord(const Vec3& p) const { return p.at(va); }
  double wcoord(const Vec3& p) const { return p.at(axis); }
};

// votes: one byte per voxel in volume index order, incremented when the
// axis parity says "inside".
void cast_axis(const AxisCaster& cast, const std::vector<Vec3>& verts,
               const std::vector<std::array<std::uint32_t, 3>>& tris,
               const std::vector<std::uint32_t>& tri_ids,
               const std::function<std::size_t(int, int, int)>& voxel_index,
               std::vector<std::uint8_t>& votes) {
  const double ju = cast.h * 2.4e-7;  // fixed jitter defeats vertex/edge alignment
  const double jv = cast.h * 3.1e-7;
  const double u0 = cast.ucoord(cast.origin);
  const double v0 = cast.vcoord(cast.origin);
  const double w0 = cast.wcoord(cast.origin);

  // Bin triangles by the columns their (u,v) bounding box touches.
  const std::size_t cols = static_cast<std::size_t>(cast.nu) * cast.nv;
  std::vector<std::vector<std::uint32_t>> bins(cols);
  for (std::uint32_t id : tri_ids) {
    const auto& t = tris[id];
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (int c = 0; c < 3; ++c) {
      const Vec3& p = verts[t[c]];
      umin = std::min(umin, cast.ucoord(p));
      umax = std::max(umax, cast.ucoord(p));
      vmin = std::min(vmin, cast.vcoord(p));
      vmax = std::max(vmax, cast.vcoord(p));
    }
    const int iu0 = std::max(0, static_cast<int>(std::ceil((umin - ju - u0) / cast.h - 0.5)));
    const int iu1 = std::min(cast.nu - 1,
                             static_cast<int>(std::floor((umax - ju - u0) / cast.h + 0.5)));
    const int iv0 = std::max(0, static_cast<int>(std::ceil((vmin - jv - v0) / cast.h - 0.5)));
    const int iv1 = std::min(cast.nv - 1,
                             static_cast<int>(std::floor((vmax - jv - v0) / cast.h + 0.5)));
    for (int iv = iv0; iv <= iv1; ++iv) {
      for (int iu = iu0; iu <= iu1; ++iu) {
        bins[static_cast<std::size_t>(iv) * cast.nu + iu].push_back(id);
      }
    }
  }

  parallel_for(cols, 64, [&](std::size_t c0, std::size_t c1) {
    std::vector<double> crossings;
    for (std::size_t col = c0; col < c1; ++col) {
      if (bins[col].empty()) continue;
      const int iu = static_cast<int>(col % cast.nu);
      const int iv = static_cast<int>(col / cast.nu);
      const double pu = u0 + iu * cast.h + ju;
      const double pv = v0 + iv * cast.h + jv;
      crossings.clear();
      for (std::uint32_t id : bins[col]) {
        const auto& t = tris[id];
        const Vec3& a = verts[t[0]];
        const Vec3& b = verts[t[1]];
        const Vec3& d = verts[t[2]];
        const double e1u = cast.ucoord(b) - cast.ucoord(a);
        const double e1v = cast.vcoord(b) - cast.vcoord(a);
        const double e2u = cast.ucoord(d) - cast.ucoord(a);
        const double e2v = cast.vcoord(d) - cast.vcoord(a);
        const double det = e1u * e2v - e1v * e2u;
        if (std::abs(det) < 1e-30) continue;  // parallel to the cast direction
        const double qu = pu - cast.ucoord(a);
        const double qv = pv - cast.vcoord(a);
        const double s = (qu * e2v - qv * e2u) / det;
        const double tpar = (e1u * qv - e1v * qu) / det;
        if (s < 0.0 || tpar < 0.0 || s + tpar > 1.0) continue;
        crossings.push_back(cast.wcoord(a) + s * (cast.wcoord(b) - cast.wcoord(a)) +
                            tpar * (cast.wcoord(d) - cast.wcoord(a)));
      }
      if (crossings.empty()) continue;
      std::sort(crossings.begin(), crossings.end());
      std::size_t below = 0;
      for (int iw = 0; iw < cast.nw; ++iw) {
        const double w = w0 + iw * cast.h;
        while (below < crossings.size() && crossings[below] < w) ++below;
        if (below & 1) {
          int ix, iy, iz;
          if (cast.axis == 0) {
            ix = iw; iy = iu; iz = iv;
          } else if (cast.axis == 1) {
            iy = iw; iz = iu; ix = iv;
          } else {
            iz = iw; ix = iu; iy = iv;
          }
          ++votes[voxel_index(ix, iy, iz)];
        }
      }
    }
  });
}

}  // namespace

LabelVolume voxelize_mesh(const TriangleMesh& mesh, double voxel_size) {
  if (mesh.empty()) throw ValidationError("voxelize_mesh: mesh has no triangles");
  if (!(voxel_size > 0.0)) throw ValidationError("voxelize_mesh: voxel_size must be > 0");
  validate(mesh);

  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  for (const Vec3& v : mesh.vertices) {
    lo = Vec3{std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = Vec3{std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }

  LabelVolume vol;
  const double h = voxel_size;
  auto count = [h](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
  };
  vol.nx = count(hi.x - lo.x);
  vol.ny = count(hi.y - lo.y);
  vol.nz = count(hi.z - lo.z);
  vol.voxel_size = h;
  const Vec3 center = (lo + hi) / 2.0;
  vol.origin = center - Vec3{(vol.nx - 1) * h / 2, (vol.ny - 1) * h / 2, (vol.nz - 1) * h / 2};
  vol.labels.assign(vol.voxel_count(), 0);
  vol.region_table.push_back({0, "air"});
  for (std::size_t i = 0; i < mesh.part_names.size(); ++i) {
    vol.region_table.push_back({static_cast<std::uint16_t>(i + 1), mesh.part_names[i]});
  }

  auto voxel_index = [&vol](int ix, int iy, int iz) { return vol.index(ix, iy, iz); };

  const std::size_t part_count = mesh.part_names.size();
  std::vector<std::vector<std::uint8_t>> inside(part_count);
  std::vector<std::size_t> voxel_counts(part_count, 0);

  for (std::size_t p = 0; p < part_count; ++p) {
    std::vector<std::uint32_t> tri_ids;
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      if (mesh.part_label[t] == p + 1) tri_ids.push_back(t);
    }
    std::vector<std::uint8_t> votes(vol.voxel_count(), 0);
    if (!tri_ids.empty()) {
      const AxisCaster casters[3] = {
          {0, 1, 2, vol.ny, vol.nz, vol.nx, h, vol.origin},
          {1, 2, 0, vol.nz, vol.nx, vol.ny, h, vol.origin},
          {2, 0, 1, vol.nx, vol.ny, vol.nz, h, vol.origin},
      };
      for (const AxisCaster& cast : casters) {
        cast_axis(cast, mesh.vertices, mesh.triangles, tri_ids, voxel_index, votes);
      }
    }
    std::size_t disagree = 0;
    std::size_t in_count = 0;
    std::vector<std::uint8_t> mask(vol.voxel_count(), 0);
    for (std::size_t i = 0; i < votes.size(); ++i) {
      if (votes[i] == 1 || votes[i] == 2) ++disagree;
      if (votes[i] >= 2) {
        mask[i] = 1;
        ++in_count;
      }
    }
    if (disagree > 0.001 * static_cast<double>(std::max<std::size_t>(in_count, 1))) {
      throw NonWatertightError(
          fmt("part \"%s\": axis parities disagree on %zu voxels (%zu inside)",
              mesh.part_names[p].c_str(), disagree, in_count),
          mesh.part_names[p]);
    }
    inside[p] = std::move(mask);
    voxel_counts[p] = in_count;
  }

  // Paint large parts first so the smallest (innermost) part wins overlaps;
  // equal counts resolve to the smaller part id.
  std::vector<std::size_t> order(part_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (voxel_counts[a] != voxel_counts[b]) return voxel_counts[a] > voxel_counts[b];
    return a > b;
  });
  for (std::size_t p : order) {
    const auto label = static_cast<std::uint16_t>(p + 1);
    for (std::size_t i = 0; i < vol.labels.size(); ++i) {
      if (inside[p][i]) vol.labels[i] = label;
    }
  }

  validate(vol);
  return vol;
}

}  // namespace xden

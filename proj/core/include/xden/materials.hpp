// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xden {

// One reference material at 100 keV. lac stays within 0.01 of mac*density
// for every built-in row; user-supplied rows must satisfy the same bound.
struct Material {
  std::string name;
  std::string formula;  // informational only
  double mac = 0.0;     // cm^2/g
  double density = 0.0; // g/cm^3
  double lac = 0.0;     // 1/cm
};

using MaterialTable = std::vector<Material>;

// The eight built-in reference rows, identical on every call.
const MaterialTable& builtin_table();

struct MaterialMatch {
  Material material;
  double distance = 0.0;  // |mu - lac| / max(lac, 1e-6)
};

// Nearest material by relative LAC distance. Exact ties prefer the smaller
// absolute gap, then earlier table order. Advisory metadata only; the
// optimizer never consumes it.
MaterialMatch classify_by_lac(double mu);
MaterialMatch classify_by_lac(double mu, const MaterialTable& table);

// Built-in rows followed by the rows of a user JSON list with the same
// fields. Rejects rows violating the lac/mac/density consistency bound.
MaterialTable load_material_table(const std::string& extra_json_path);

const Material* find_material(const MaterialTable& table, std::string_view name);

}  // namespace xden

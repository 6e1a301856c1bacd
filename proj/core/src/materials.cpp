// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/materials.hpp"

#include <cmath>

#include "fmt.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"

namespace xden {

const MaterialTable& builtin_table() {
  static const MaterialTable table = {
      {"Water", "H2O", 0.17, 1.00, 0.17},
      {"Air", "N2, O2", 0.15, 0.0012, 1.8e-4},
      {"Glass", "SiO2", 0.18, 2.40, 0.432},
      {"Plastic-PP", "(C3H6)n", 0.18, 0.90, 0.16},
      {"Plastic-PVC", "(C2H3Cl)n", 0.18, 1.40, 0.25},
      {"Rubber", "(C5H8)n", 0.19, 1.20, 0.22},
      {"Wood", "C6H10O5", 0.16, 0.80, 0.12},
      {"Aluminum", "Al", 0.19, 2.70, 0.51},
  };
  return table;
}

MaterialMatch classify_by_lac(double mu) { return classify_by_lac(mu, builtin_table()); }

MaterialMatch classify_by_lac(double mu, const MaterialTable& table) {
  if (!(mu >= 0.0)) throw ValidationError(detail::fmt("classify_by_lac: mu %g must be >= 0", mu));
  if (table.empty()) throw ValidationError("classify_by_lac: empty material table");
  const Material* best = nullptr;
  double best_rel = 0.0;
  double best_abs = 0.0;
  for (const Material& m : table) {
    const double abs_gap = std::abs(mu - m.lac);
    const double rel = abs_gap / std::max(m.lac, 1e-6);
    // Strictly better relative distance wins; an exact tie falls back to the
    // smaller absolute gap, then to earlier table order.
    if (best == nullptr || rel < best_rel || (rel == best_rel && abs_gap < best_abs)) {
      best = &m;
      best_rel = rel;
      best_abs = abs_gap;
    }
  }
  return {*best, best_rel};
}

namespace {

void check_row(const Material& m, const std::string& origin) {
  if (m.name.empty()) throw ValidationError(detail::fmt("%s: material with empty name", origin.c_str()));
  if (!(m.mac > 0.0) || !(m.density > 0.0) || !(m.lac >= 0.0)) {
    throw ValidationError(
        detail::fmt("%s: material \"%s\" needs mac > 0, density > 0, lac >= 0", origin.c_str(),
                    m.name.c_str()));
  }
  if (std::abs(m.lac - m.mac * m.density) > 0.01) {
    throw ValidationError(detail::fmt(
        "%s: material \"%s\" violates |lac - mac*density| <= 0.01 (gap %.4f)", origin.c_str(),
        m.name.c_str(), std::abs(m.lac - m.mac * m.density)));
  }
}

}  // namespace

MaterialTable load_material_table(const std::string& extra_json_path) {
  MaterialTable table = builtin_table();
  const auto doc = detail::parse_json_file(extra_json_path);
  if (!doc.is_array()) {
    throw ValidationError(
        detail::fmt("%s: expected a JSON array of materials", extra_json_path.c_str()));
  }
  for (const auto& row : doc) {
    Material m;
    m.name = detail::require_string(row, "name", extra_json_path);
    if (row.contains("formula")) m.formula = detail::require_string(row, "formula", extra_json_path);
    m.mac = detail::require_number(row, "mac", extra_json_path);
    m.density = detail::require_number(row, "density", extra_json_path);
    m.lac = detail::require_number(row, "lac", extra_json_path);
    check_row(m, extra_json_path);
    if (find_material(table, m.name)) {
      throw ValidationError(detail::fmt("%s: duplicate material name \"%s\"",
                                        extra_json_path.c_str(), m.name.c_str()));
    }
    table.push_back(std::move(m));
  }
  return table;
}

const Material* find_material(const MaterialTable& table, std::string_view name) {
  for (const Material& m : table) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

}  // namespace xden

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/attenuation.hpp"

#include <cmath>

#include "fmt.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"

namespace xden {

AttenuationVector AttenuationVector::for_regions(std::size_t k_plus_1, double fill) {
  AttenuationVector out;
  out.mu.assign(k_plus_1, fill);
  if (!out.mu.empty()) out.mu[0] = kAirLac;
  return out;
}

void validate(const AttenuationVector& mu) {
  if (mu.mu.empty()) throw ValidationError("attenuation vector is empty (air region required)");
  for (std::size_t k = 0; k < mu.mu.size(); ++k) {
    const double v = mu.mu[k];
    // NaN marks an unidentifiable region and is allowed; negatives are not.
    if (!std::isnan(v) && !(v >= 0.0)) {
      throw ValidationError(detail::fmt("mu[%zu] = %g must be >= 0", k, v));
    }
  }
  if (mu.air_fixed && mu.mu[0] != kAirLac) {
    throw ValidationError(
        detail::fmt("air is fixed but mu[0] = %g differs from %g", mu.mu[0], kAirLac));
  }
}

AttenuationVector load_attenuation(const std::string& path) {
  const auto doc = detail::parse_json_file(path);
  const std::string schema = detail::require_string(doc, "schema", path);
  if (schema != "xden-mu/1") {
    throw ValidationError(
        detail::fmt("%s: schema \"%s\" is not xden-mu/1", path.c_str(), schema.c_str()));
  }
  AttenuationVector out;
  const auto& arr = detail::require_array(doc, "mu_cm_inv", 0, path);
  for (const auto& e : arr) {
    if (e.is_null()) {
      out.mu.push_back(std::nan(""));
    } else if (e.is_number()) {
      out.mu.push_back(e.get<double>());
    } else {
      throw ValidationError(detail::fmt("%s: mu_cm_inv entries must be numbers or null",
                                        path.c_str()));
    }
  }
  if (doc.contains("air_fixed")) {
    if (!doc.at("air_fixed").is_boolean()) {
      throw ValidationError(detail::fmt("%s: air_fixed must be a boolean", path.c_str()));
    }
    out.air_fixed = doc.at("air_fixed").get<bool>();
  }
  if (doc.contains("energy_keV")) out.energy_keV = detail::require_number(doc, "energy_keV", path);
  validate(out);
  return out;
}

void save_attenuation(const AttenuationVector& mu, const std::string& path) {
  detail::json doc;
  doc["schema"] = "xden-mu/1";
  doc["air_fixed"] = mu.air_fixed;
  doc["energy_keV"] = mu.energy_keV;
  auto arr = detail::json::array();
  for (double v : mu.mu) {
    if (std::isnan(v)) {
      arr.push_back(nullptr);
    } else {
      arr.push_back(v);
    }
  }
  doc["mu_cm_inv"] = std::move(arr);
  detail::write_json_file(path, doc);
}

}  // namespace xden

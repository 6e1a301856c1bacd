// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace xden {

// Air's LAC at 100 keV, the value the optimizer pins region 0 to.
inline constexpr double kAirLac = 1.8e-4;  // 1/cm

// The unknowns of the fit: one LAC per region id, index 0 = air.
struct AttenuationVector {
  std::vector<double> mu;  // 1/cm, size K+1
  bool air_fixed = true;
  double energy_keV = 100.0;

  std::size_t region_count() const { return mu.size(); }  // K+1 including air

  static AttenuationVector for_regions(std::size_t k_plus_1, double fill = 0.0);
};

// Throws ValidationError on negative entries, empty mu, or a pinned air
// entry that is not kAirLac.
void validate(const AttenuationVector& mu);

// JSON document IO ("xden-mu/1").
AttenuationVector load_attenuation(const std::string& path);
void save_attenuation(const AttenuationVector& mu, const std::string& path);

}  // namespace xden

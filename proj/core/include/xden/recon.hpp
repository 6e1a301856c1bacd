// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xden/attenuation.hpp"
#include "xden/raytrace.hpp"
#include "xden/volume.hpp"
#include "xden/xray.hpp"

namespace xden {

enum class LossDomain { intensity, projection };
enum class MacMode { universal, per_material };

struct ReconConfig {
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int max_iterations = 10000;
  // Converged when the relative objective decrease stays below
  // convergence_tol for convergence_window consecutive iterations.
  double convergence_tol = 1e-8;
  int convergence_window = 50;
  double init_mu = 0.17;  // 1/cm, water's LAC
  LossDomain loss_domain = LossDomain::intensity;
  bool clamp_nonnegative = true;
};

void validate(const ReconConfig& config);

struct ReconResult {
  AttenuationVector mu;              // NaN entries mark unidentifiable regions
  double final_objective = 0.0;      // at the returned mu
  int iterations_run = 0;
  bool converged = false;
  std::vector<bool> identifiable;    // size K+1; air counts as identifiable
  std::vector<double> objective_trace;  // one entry per iteration
};

// Sum of squared residuals over both views. Intensity domain compares
// simulated and measured intensities directly; projection domain compares
// both after the log transform (measured pixels must then be > 0).
double objective(const AttenuationVector& mu, const PathLengthMatrix& matrix,
                 const std::pair<XRayImage, XRayImage>& measured, LossDomain domain);

// Analytic gradient of `objective` with respect to the free entries of mu:
// all K+1 regions when air is free, regions 1..K (air omitted) when fixed.
std::vector<double> gradient(const AttenuationVector& mu, const PathLengthMatrix& matrix,
                             const std::pair<XRayImage, XRayImage>& measured, LossDomain domain);

// Adam descent from init_mu with air pinned (when fixed), nonnegativity
// clamping, and the sustained-relative-decrease stopping rule. Regions whose
// total biplanar path length is under 1e-9 cm are flagged unidentifiable and
// excluded before optimization. Deterministic for any worker count.
ReconResult reconstruct(const PathLengthMatrix& matrix,
                        const std::pair<XRayImage, XRayImage>& measured,
                        const ReconConfig& config = {});

// rho = mu / mac. Throws ValidationError unless mac > 0 and mu >= 0.
double lac_to_density(double mu_k, double mac = 0.17);

// Piecewise-constant density over the label grid, x-fastest.
struct DensityField {
  int nx = 0, ny = 0, nz = 0;
  double voxel_size = 0.0;  // cm
  Vec3 origin{};
  std::vector<double> rho;  // g/cm^3; NaN marks unidentifiable regions

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  Vec3 voxel_center(int ix, int iy, int iz) const {
    return origin + Vec3{ix * voxel_size, iy * voxel_size, iz * voxel_size};
  }
};

void validate(const DensityField& field);

// rho_k everywhere in region k: universal mode divides by 0.17, per_material
// uses each region's classified material MAC. Air voxels get 0.0012 g/cm^3;
// unidentifiable regions propagate NaN.
DensityField build_density_field(const LabelVolume& vol, const ReconResult& result,
                                 MacMode mac_mode);

// Result JSON ("xden-recon/1") with per-region mu, density, identifiability,
// and a nearest-material guess; region names come from the volume.
std::string recon_result_to_json(const ReconResult& result, const LabelVolume& vol,
                                 const ReconConfig& config);
void save_recon_result(const ReconResult& result, const LabelVolume& vol,
                       const ReconConfig& config, const std::string& path);

// Reads back a result written by save_recon_result; null mu entries become
// NaN. The objective trace is not serialized and comes back empty.
ReconResult load_recon_result(const std::string& path);

// Config JSON with the config_echo field names; absent fields keep their
// defaults, so a result's echo feeds straight back in.
ReconConfig load_recon_config(const std::string& path);

// Sidecar pair IO ("xden-dvol/1"): <name>.dvol.json + <name>.dvol.raw (f32le).
DensityField load_density(const std::string& json_path);
void save_density(const DensityField& field, const std::string& json_path);

}  // namespace xden

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/recon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fmt.hpp"
#include "json_util.hpp"
#include "xden/errors.hpp"
#include "xden/materials.hpp"
#include "xden/parallel.hpp"

namespace xden {

using detail::fmt;

void validate(const ReconConfig& config) {
  if (!(config.learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
  if (!(config.adam_beta1 > 0.0 && config.adam_beta1 < 1.0) ||
      !(config.adam_beta2 > 0.0 && config.adam_beta2 < 1.0)) {
    throw ValidationError("adam betas must lie in (0,1)");
  }
  if (!(config.adam_epsilon > 0.0)) throw ValidationError("adam_epsilon must be > 0");
  if (config.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (!(config.convergence_tol > 0.0)) throw ValidationError("convergence_tol must be > 0");
  if (config.convergence_window < 1) throw ValidationError("convergence_window must be >= 1");
  if (!(config.init_mu >= 0.0)) throw ValidationError("init_mu must be >= 0");
}

namespace {

constexpr double kIdentifiablePath = 1e-9;  // cm
constexpr double kObjectiveFloor = 1e-18;   // residual-zero start stops here

struct EvalAccum {
  double obj = 0.0;
  std::vector<double> grad;  // size K+1, air slot present but unused when fixed
};

void check_measured(const PathLengthMatrix& matrix,
                    const std::pair<XRayImage, XRayImage>& measured) {
  const XRayImage* imgs[2] = {&measured.first, &measured.second};
  for (int vi = 0; vi < 2; ++vi) {
    const auto& view = matrix.views[vi];
    const XRayImage& img = *imgs[vi];
    if (img.width != view.width || img.height != view.height) {
      throw ShapeError(fmt("view %d: measured image is %dx%d, matrix expects %dx%d", vi,
                           img.width, img.height, view.width, view.height));
    }
    if (img.i0 != view.i0) {
      throw ShapeError(fmt("view %d: measured i0 %g differs from the geometry's %g", vi, img.i0,
                           view.i0));
    }
  }
}

// Measured log-projections for the projection-domain loss; throws
// SaturationError on nonpositive measured pixels.
std::vector<double> measured_projection(const XRayImage& img) {
  std::vector<double> p(img.pixel_count());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(img.intensities[i] > 0.0)) {
      const int px = static_cast<int>(i % static_cast<std::size_t>(img.width));
      const int py = static_cast<int>(i / static_cast<std::size_t>(img.width));
      throw SaturationError(fmt("measured pixel (%d,%d) intensity %g: projection-domain loss "
                                "needs positive intensities",
                                px, py, img.intensities[i]),
                            px, py);
    }
    p[i] = -std::log(img.intensities[i] / img.i0);
  }
  return p;
}

// Accumulates one pixel's squared residual and gradient contribution.
// Intensity domain: r = i0 e^{-s} - I~, dr/dmu_k = -l_k i0 e^{-s}.
// Projection domain: r = s - p~, dr/dmu_k = l_k.
inline void eval_pixel(const PathLengthMatrix::View& view, std::size_t p,
                       const std::vector<double>& mu, const double* measured_i,
                       const double* measured_p, bool projection, EvalAccum& acc) {
  double s = 0.0;
  for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
    s += mu[view.region_ids[i]] * view.lengths[i];
  }
  if (projection) {
    const double r = s - measured_p[p];
    acc.obj += r * r;
    const double two_r = 2.0 * r;
    for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
      acc.grad[view.region_ids[i]] += two_r * view.lengths[i];
    }
  } else {
    const double sim = view.i0 * std::exp(-s);
    const double r = sim - measured_i[p];
    acc.obj += r * r;
    const double factor = -2.0 * r * sim;
    for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
      acc.grad[view.region_ids[i]] += factor * view.lengths[i];
    }
  }
}

EvalAccum combine(EvalAccum a, const EvalAccum& b) {
  a.obj += b.obj;
  for (std::size_t k = 0; k < a.grad.size(); ++k) a.grad[k] += b.grad[k];
  return a;
}

// Full-image evaluation used by the public objective/gradient entry points.
EvalAccum eval_all(const std::vector<double>& mu, const PathLengthMatrix& matrix,
                   const std::pair<XRayImage, XRayImage>& measured, LossDomain domain) {
  const bool projection = domain == LossDomain::projection;
  const XRayImage* imgs[2] = {&measured.first, &measured.second};
  EvalAccum total{0.0, std::vector<double>(mu.size(), 0.0)};
  for (int vi = 0; vi < 2; ++vi) {
    const auto& view = matrix.views[vi];
    std::vector<double> proj;
    if (projection) proj = measured_projection(*imgs[vi]);
    const double* mi = imgs[vi]->intensities.data();
    const double* mp = projection ? proj.data() : nullptr;
    EvalAccum view_acc = parallel_reduce<EvalAccum>(
        view.pixel_count(), 4096, EvalAccum{0.0, std::vector<double>(mu.size(), 0.0)},
        [&](std::size_t p0, std::size_t p1) {
          EvalAccum acc{0.0, std::vector<double>(mu.size(), 0.0)};
          for (std::size_t p = p0; p < p1; ++p) {
            eval_pixel(view, p, mu, mi, mp, projection, acc);
          }
          return acc;
        },
        combine);
    total = combine(std::move(total), view_acc);
  }
  return total;
}

std::vector<double> finite_mu(const AttenuationVector& mu) {
  for (double v : mu.mu) {
    if (!std::isfinite(v)) {
      throw ValidationError("attenuation vector holds non-finite entries; fill or exclude "
                            "unidentifiable regions first");
    }
  }
  return mu.mu;
}

void check_k(const PathLengthMatrix& matrix, const AttenuationVector& mu) {
  if (matrix.region_count != mu.region_count()) {
    throw ShapeError(fmt("matrix has %u regions, attenuation vector has %zu",
                         matrix.region_count, mu.region_count()));
  }
}

}  // namespace

double objective(const AttenuationVector& mu, const PathLengthMatrix& matrix,
                 const std::pair<XRayImage, XRayImage>& measured, LossDomain domain) {
  check_k(matrix, mu);
  check_measured(matrix, measured);
  return eval_all(finite_mu(mu), matrix, measured, domain).obj;
}

std::vector<double> gradient(const AttenuationVector& mu, const PathLengthMatrix& matrix,
                             const std::pair<XRayImage, XRayImage>& measured,
                             LossDomain domain) {
  check_k(matrix, mu);
  check_measured(matrix, measured);
  EvalAccum acc = eval_all(finite_mu(mu), matrix, measured, domain);
  if (mu.air_fixed) {
    return std::vector<double>(acc.grad.begin() + 1, acc.grad.end());
  }
  return acc.grad;
}

ReconResult reconstruct(const PathLengthMatrix& matrix,
                        const std::pair<XRayImage, XRayImage>& measured,
                        const ReconConfig& config) {
  validate(config);
  check_measured(matrix, measured);
  const std::size_t k_plus_1 = matrix.region_count;
  if (k_plus_1 < 1) throw ValidationError("matrix has no regions");

  // Identifiability gate: a region the rays never cross has zero gradient
  // and would silently keep its init value.
  const std::vector<double> totals = total_path_per_region(matrix);
  std::vector<bool> identifiable(k_plus_1, false);
  identifiable[0] = true;
  std::vector<std::size_t> free_regions;
  for (std::size_t k = 1; k < k_plus_1; ++k) {
    if (totals[k] >= kIdentifiablePath) {
      identifiable[k] = true;
      free_regions.push_back(k);
    }
  }
  if (free_regions.empty()) {
    throw DegenerateError("no identifiable region: every non-air region has zero biplanar "
                          "path length");
  }

  const bool projection = config.loss_domain == LossDomain::projection;
  std::vector<std::vector<double>> proj(2);
  const XRayImage* imgs[2] = {&measured.first, &measured.second};
  if (projection) {
    proj[0] = measured_projection(measured.first);
    proj[1] = measured_projection(measured.second);
  }

  // Pixels with no free-region entry contribute a constant residual and no
  // gradient; fold them into a constant once and sweep only the rest.
  std::vector<bool> is_free(k_plus_1, false);
  for (std::size_t k : free_regions) is_free[k] = true;
  std::array<std::vector<std::uint32_t>, 2> active;
  std::vector<double> mu(k_plus_1, 0.0);
  mu[0] = kAirLac;
  for (std::size_t k : free_regions) mu[k] = config.init_mu;

  double static_obj = 0.0;
  for (int vi = 0; vi < 2; ++vi) {
    const auto& view = matrix.views[vi];
    for (std::size_t p = 0; p < view.pixel_count(); ++p) {
      bool has_free = false;
      for (std::uint64_t i = view.offsets[p]; i < view.offsets[p + 1]; ++i) {
        if (is_free[view.region_ids[i]]) {
          has_free = true;
          break;
        }
      }
      if (has_free) active[vi].push_back(static_cast<std::uint32_t>(p));
    }
    // Constant part, summed via the same deterministic chunked reduction.
    const double* mi = imgs[vi]->intensities.data();
    const double* mp = projection ? proj[vi].data() : nullptr;
    const auto& act = active[vi];
    EvalAccum static_acc = parallel_reduce<EvalAccum>(
        view.pixel_count(), 4096, EvalAccum{0.0, std::vector<double>(k_plus_1, 0.0)},
        [&](std::size_t p0, std::size_t p1) {
          EvalAccum acc{0.0, std::vector<double>(k_plus_1, 0.0)};
          auto it = std::lower_bound(act.begin(), act.end(), p0);
          for (std::size_t p = p0; p < p1; ++p) {
            while (it != act.end() && *it < p) ++it;
            const bool is_active = it != act.end() && *it == p;
            if (!is_active) eval_pixel(view, p, mu, mi, mp, projection, acc);
          }
          return acc;
        },
        combine);
    static_obj += static_acc.obj;
  }

  // Adam over the free entries.
  std::vector<double> m(free_regions.size(), 0.0);
  std::vector<double> v(free_regions.size(), 0.0);
  double b1_pow = 1.0;
  double b2_pow = 1.0;

  auto eval_active = [&]() {
    EvalAccum total{0.0, std::vector<double>(k_plus_1, 0.0)};
    for (int vi = 0; vi < 2; ++vi) {
      const auto& view = matrix.views[vi];
      const double* mi = imgs[vi]->intensities.data();
      const double* mp = projection ? proj[vi].data() : nullptr;
      const auto& act = active[vi];
      EvalAccum view_acc = parallel_reduce<EvalAccum>(
          act.size(), 4096, EvalAccum{0.0, std::vector<double>(k_plus_1, 0.0)},
          [&](std::size_t a0, std::size_t a1) {
            EvalAccum acc{0.0, std::vector<double>(k_plus_1, 0.0)};
            for (std::size_t a = a0; a < a1; ++a) {
              eval_pixel(view, act[a], mu, mi, mp, projection, acc);
            }
            return acc;
          },
          combine);
      total = combine(std::move(total), view_acc);
    }
    total.obj += static_obj;
    return total;
  };

  ReconResult result;
  result.objective_trace.reserve(256);
  int streak = 0;
  bool fresh_final = true;

  for (int t = 1; t <= config.max_iterations; ++t) {
    EvalAccum acc = eval_active();
    if (!std::isfinite(acc.obj)) {
      throw NumericalError(fmt("objective became non-finite at iteration %d", t), t);
    }
    const double prev =
        result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
    result.objective_trace.push_back(acc.obj);
    if (acc.obj <= kObjectiveFloor) {
      result.converged = true;
      fresh_final = false;
      break;
    }
    if (result.objective_trace.size() >= 2) {
      const double rel = (prev - acc.obj) / std::max(prev, 1e-300);
      streak = rel < config.convergence_tol ? streak + 1 : 0;
      if (streak >= config.convergence_window) {
        result.converged = true;
        fresh_final = false;
        break;
      }
    }
    b1_pow *= config.adam_beta1;
    b2_pow *= config.adam_beta2;
    for (std::size_t i = 0; i < free_regions.size(); ++i) {
      const double g = acc.grad[free_regions[i]];
      m[i] = config.adam_beta1 * m[i] + (1.0 - config.adam_beta1) * g;
      v[i] = config.adam_beta2 * v[i] + (1.0 - config.adam_beta2) * g * g;
      const double m_hat = m[i] / (1.0 - b1_pow);
      const double v_hat = v[i] / (1.0 - b2_pow);
      double next = mu[free_regions[i]] -
                    config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
      if (config.clamp_nonnegative && next < 0.0) next = 0.0;
      mu[free_regions[i]] = next;
    }
  }

  result.iterations_run = static_cast<int>(result.objective_trace.size());
  // The last trace entry precedes the last Adam step when the loop ran out,
  // so re-evaluate at the returned parameters.
  result.final_objective = fresh_final ? eval_active().obj : result.objective_trace.back();

  result.identifiable = identifiable;
  result.mu.air_fixed = true;
  result.mu.energy_keV = 100.0;
  result.mu.mu = mu;
  for (std::size_t k = 1; k < k_plus_1; ++k) {
    if (!identifiable[k]) result.mu.mu[k] = std::nan("");
  }
  return result;
}

double lac_to_density(double mu_k, double mac) {
  if (!(mac > 0.0)) throw ValidationError(fmt("mac %g must be > 0", mac));
  if (!(mu_k >= 0.0)) throw ValidationError(fmt("mu %g must be >= 0", mu_k));
  return mu_k / mac;
}

void validate(const DensityField& field) {
  if (!(field.voxel_size > 0.0)) throw ValidationError("voxel_size must be > 0");
  if (field.nx < 1 || field.ny < 1 || field.nz < 1) {
    throw ValidationError(
        fmt("dims (%d,%d,%d) must each be >= 1", field.nx, field.ny, field.nz));
  }
  if (field.rho.size() != field.voxel_count()) {
    throw ShapeError(fmt("density payload holds %zu voxels, dims say %zu", field.rho.size(),
                         field.voxel_count()));
  }
  for (std::size_t i = 0; i < field.rho.size(); ++i) {
    const double v = field.rho[i];
    if (std::isnan(v)) continue;  // unidentifiable marker
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(fmt("voxel %zu holds non-physical density %g", i, v));
    }
  }
}

DensityField build_density_field(const LabelVolume& vol, const ReconResult& result,
                                 MacMode mac_mode) {
  validate(vol);
  if (vol.region_count() != result.mu.region_count()) {
    throw ShapeError(fmt("volume has %zu regions, result has %zu", vol.region_count(),
                         result.mu.region_count()));
  }
  std::vector<double> rho_by_region(vol.region_count());
  rho_by_region[0] = 0.0012;  // air's tabulated density, not mu_air/0.17
  for (std::size_t k = 1; k < vol.region_count(); ++k) {
    const double mu_k = result.mu.mu[k];
    if (std::isnan(mu_k)) {
      rho_by_region[k] = std::nan("");
      continue;
    }
    if (mac_mode == MacMode::universal) {
      rho_by_region[k] = lac_to_density(mu_k);
    } else {
      const MaterialMatch match = classify_by_lac(mu_k);
      rho_by_region[k] = lac_to_density(mu_k, match.material.mac);
    }
  }

  DensityField field;
  field.nx = vol.nx;
  field.ny = vol.ny;
  field.nz = vol.nz;
  field.voxel_size = vol.voxel_size;
  field.origin = vol.origin;
  field.rho.resize(vol.voxel_count());
  parallel_for(vol.voxel_count(), 65536, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) field.rho[i] = rho_by_region[vol.labels[i]];
  });
  return field;
}

namespace {

detail::json config_to_json(const ReconConfig& config) {
  detail::json doc;
  doc["learning_rate"] = config.learning_rate;
  doc["adam_beta1"] = config.adam_beta1;
  doc["adam_beta2"] = config.adam_beta2;
  doc["adam_epsilon"] = config.adam_epsilon;
  doc["max_iterations"] = config.max_iterations;
  doc["convergence_tol"] = config.convergence_tol;
  doc["convergence_window"] = config.convergence_window;
  doc["init_mu"] = config.init_mu;
  doc["loss_domain"] = config.loss_domain == LossDomain::projection ? "projection" : "intensity";
  doc["clamp_nonnegative"] = config.clamp_nonnegative;
  return doc;
}

}  // namespace

std::string recon_result_to_json(const ReconResult& result, const LabelVolume& vol,
                                 const ReconConfig& config) {
  if (vol.region_count() != result.mu.region_count()) {
    throw ShapeError(fmt("volume has %zu regions, result has %zu", vol.region_count(),
                         result.mu.region_count()));
  }
  detail::json doc;
  doc["schema"] = "xden-recon/1";
  auto regions = detail::json::array();
  for (std::size_t k = 0; k < vol.region_count(); ++k) {
    detail::json r;
    r["id"] = vol.region_table[k].id;
    r["name"] = vol.region_table[k].name;
    const double mu_k = result.mu.mu[k];
    r["identifiable"] = result.identifiable.empty() ? true : bool(result.identifiable[k]);
    if (std::isnan(mu_k)) {
      r["mu_cm_inv"] = nullptr;
      r["rho_g_cm3"] = nullptr;
      r["material_guess"] = nullptr;
    } else {
      r["mu_cm_inv"] = mu_k;
      r["rho_g_cm3"] = k == 0 ? 0.0012 : lac_to_density(mu_k);
      r["material_guess"] = classify_by_lac(mu_k).material.name;
    }
    regions.push_back(std::move(r));
  }
  doc["regions"] = std::move(regions);
  doc["final_objective"] = result.final_objective;
  doc["iterations"] = result.iterations_run;
  doc["converged"] = result.converged;
  doc["config_echo"] = config_to_json(config);
  return doc.dump(2) + "\n";
}

void save_recon_result(const ReconResult& result, const LabelVolume& vol,
                       const ReconConfig& config, const std::string& path) {
  detail::write_file_text(path, recon_result_to_json(result, vol, config));
}

ReconResult load_recon_result(const std::string& path) {
  const auto doc = detail::parse_json_file(path);
  const std::string schema = detail::require_string(doc, "schema", path);
  if (schema != "xden-recon/1") {
    throw ValidationError(fmt("%s: schema \"%s\" is not xden-recon/1", path.c_str(),
                              schema.c_str()));
  }
  const auto& regions = detail::require_array(doc, "regions", 0, path);
  if (regions.empty()) throw ValidationError(fmt("%s: regions array is empty", path.c_str()));
  ReconResult result;
  result.mu.mu.resize(regions.size());
  result.identifiable.resize(regions.size());
  for (std::size_t k = 0; k < regions.size(); ++k) {
    const auto& r = regions[k];
    if (!r.is_object() || !r.contains("id") || !r.contains("mu_cm_inv")) {
      throw ValidationError(fmt("%s: regions[%zu] needs id and mu_cm_inv", path.c_str(), k));
    }
    if (r.at("id").get<std::size_t>() != k) {
      throw ValidationError(fmt("%s: regions[%zu] id out of order", path.c_str(), k));
    }
    const auto& mu_k = r.at("mu_cm_inv");
    result.mu.mu[k] =
        mu_k.is_null() ? std::numeric_limits<double>::quiet_NaN() : mu_k.get<double>();
    result.identifiable[k] = !r.contains("identifiable") || r.at("identifiable").get<bool>();
  }
  result.final_objective = detail::require_number(doc, "final_objective", path);
  result.iterations_run = detail::require_int(doc, "iterations", path);
  result.converged = doc.contains("converged") && doc.at("converged").get<bool>();
  validate(result.mu);
  return result;
}

ReconConfig load_recon_config(const std::string& path) {
  const auto doc = detail::parse_json_file(path);
  if (!doc.is_object()) throw ValidationError(fmt("%s: expected a JSON object", path.c_str()));
  ReconConfig config;
  auto number = [&](const char* key, double fallback) {
    return doc.contains(key) ? detail::require_number(doc, key, path) : fallback;
  };
  config.learning_rate = number("learning_rate", config.learning_rate);
  config.adam_beta1 = number("adam_beta1", config.adam_beta1);
  config.adam_beta2 = number("adam_beta2", config.adam_beta2);
  config.adam_epsilon = number("adam_epsilon", config.adam_epsilon);
  if (doc.contains("max_iterations")) {
    config.max_iterations = detail::require_int(doc, "max_iterations", path);
  }
  config.convergence_tol = number("convergence_tol", config.convergence_tol);
  if (doc.contains("convergence_window")) {
    config.convergence_window = detail::require_int(doc, "convergence_window", path);
  }
  config.init_mu = number("init_mu", config.init_mu);
  if (doc.contains("loss_domain")) {
    const std::string domain = detail::require_string(doc, "loss_domain", path);
    if (domain == "intensity") {
      config.loss_domain = LossDomain::intensity;
    } else if (domain == "projection") {
      config.loss_domain = LossDomain::projection;
    } else {
      throw ValidationError(
          fmt("%s: loss_domain \"%s\" is not intensity or projection", path.c_str(),
              domain.c_str()));
    }
  }
  if (doc.contains("clamp_nonnegative")) {
    if (!doc.at("clamp_nonnegative").is_boolean()) {
      throw ValidationError(fmt("%s: clamp_nonnegative must be boolean", path.c_str()));
    }
    config.clamp_nonnegative = doc.at("clamp_nonnegative").get<bool>();
  }
  validate(config);
  return config;
}

DensityField load_density(const std::string& json_path) {
  const auto doc = detail::parse_json_file(json_path);
  const std::string schema = detail::require_string(doc, "schema", json_path);
  if (schema != "xden-dvol/1") {
    throw ValidationError(
        fmt("%s: schema \"%s\" is not xden-dvol/1", json_path.c_str(), schema.c_str()));
  }
  DensityField field;
  const auto& dims = detail::require_array(doc, "dims", 3, json_path);
  field.nx = dims[0].get<int>();
  field.ny = dims[1].get<int>();
  field.nz = dims[2].get<int>();
  field.voxel_size = detail::require_number(doc, "voxel_size_cm", json_path);
  const auto& org = detail::require_array(doc, "origin_cm", 3, json_path);
  field.origin = Vec3{org[0].get<double>(), org[1].get<double>(), org[2].get<double>()};
  const std::string dtype = detail::require_string(doc, "dtype", json_path);
  const std::string order = detail::require_string(doc, "order", json_path);
  if (dtype != "f32le" || order != "x-fastest") {
    throw ValidationError(fmt("%s: expected dtype f32le, order x-fastest", json_path.c_str()));
  }
  if (field.nx < 1 || field.ny < 1 || field.nz < 1) {
    throw ValidationError(fmt("%s: dims (%d,%d,%d) must each be >= 1", json_path.c_str(),
                              field.nx, field.ny, field.nz));
  }
  const auto raw = detail::read_raw_f32(detail::sidecar_raw_path(json_path), field.voxel_count());
  field.rho.assign(raw.begin(), raw.end());
  validate(field);
  return field;
}

void save_density(const DensityField& field, const std::string& json_path) {
  validate(field);
  detail::json doc;
  doc["schema"] = "xden-dvol/1";
  doc["dims"] = {field.nx, field.ny, field.nz};
  doc["voxel_size_cm"] = field.voxel_size;
  doc["origin_cm"] = {field.origin.x, field.origin.y, field.origin.z};
  doc["dtype"] = "f32le";
  doc["order"] = "x-fastest";
  detail::write_json_file(json_path, doc);
  std::vector<float> raw(field.rho.begin(), field.rho.end());
  detail::write_raw_f32(detail::sidecar_raw_path(json_path), raw);
}

}  // namespace xden

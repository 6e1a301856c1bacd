// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

// Batch front end for the density-from-biplanar-X-ray pipeline:
//   phantom/voxelize/geom -> render -> reconstruct -> density -> eval,
// plus massprops/stability for the downstream manipulation checks.
//
// Exit codes: 0 ok, 2 input validation, 3 shape/consistency mismatch,
// 4 finished without converging (result still written), 5 degenerate
// problem or numerical failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "xden/errors.hpp"
#include "xden/geometry.hpp"
#include "xden/materials.hpp"
#include "xden/mesh.hpp"
#include "xden/metrics.hpp"
#include "xden/parallel.hpp"
#include "xden/physics.hpp"
#include "xden/recon.hpp"
#include "xden/version.hpp"
#include "xden/volume.hpp"
#include "xden/xray.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitShape = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitDegenerate = 5;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const xden::ShapeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitShape;
  } catch (const xden::DegenerateError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const xden::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const xden::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(out_path.c_str(), "wb");
  if (!f) throw xden::ValidationError("cannot open " + out_path + " for writing");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

xden::Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

// Shared flags every subcommand carries.
void add_common(CLI::App* cmd, int* threads) {
  cmd->add_option("--threads", *threads, "Worker threads (0 = XDEN_THREADS or all cores)")
      ->default_val(0);
  cmd->set_version_flag("--version", xden::kVersionString);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biplanar X-ray density reconstruction pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", xden::kVersionString);

  int threads = 0;

  // phantom: analytic test volume plus ground-truth attenuation.
  auto* cmd_phantom = app.add_subcommand("phantom", "Rasterize an analytic phantom spec");
  std::string phantom_spec, phantom_out, phantom_mu;
  cmd_phantom->add_option("--spec", phantom_spec, "Phantom spec JSON")->required();
  cmd_phantom->add_option("-o,--output", phantom_out, "Output label volume (.lvol.json)")
      ->required();
  cmd_phantom->add_option("--emit-mu", phantom_mu, "Also write ground-truth attenuation JSON");
  add_common(cmd_phantom, &threads);

  // voxelize: segmented OBJ mesh to label volume.
  auto* cmd_voxelize = app.add_subcommand("voxelize", "Voxelize a part-segmented OBJ mesh");
  std::string vox_mesh, vox_out;
  double vox_size = 0.0;
  cmd_voxelize->add_option("--mesh", vox_mesh, "ASCII OBJ, one object group per part")
      ->required();
  cmd_voxelize->add_option("--voxel-size", vox_size, "Voxel edge length, cm")->required();
  cmd_voxelize->add_option("-o,--output", vox_out, "Output label volume (.lvol.json)")
      ->required();
  add_common(cmd_voxelize, &threads);

  // geom: canonical orthogonal two-view setup sized for a volume.
  auto* cmd_geom = app.add_subcommand("geom", "Generate an orthogonal biplanar setup");
  std::string geom_volume, geom_out, geom_kind = "parallel";
  int geom_resolution = 256;
  double geom_pitch = 0.05, geom_i0 = 1.0;
  cmd_geom->add_option("--volume", geom_volume, "Label volume the detectors must cover")
      ->required();
  cmd_geom->add_option("-o,--output", geom_out, "Output biplanar geometry JSON")->required();
  cmd_geom->add_option("--resolution", geom_resolution, "Detector resolution, pixels per side");
  cmd_geom->add_option("--pitch", geom_pitch, "Pixel pitch, cm");
  cmd_geom->add_option("--kind", geom_kind, "Beam kind: parallel or cone");
  cmd_geom->add_option("--i0", geom_i0, "Air-scan reference intensity");
  add_common(cmd_geom, &threads);

  // render: forward model, two views.
  auto* cmd_render = app.add_subcommand("render", "Render both X-ray views of a volume");
  std::string render_volume, render_mu, render_geom;
  std::vector<std::string> render_out;
  double render_photons = -1.0;
  std::uint64_t render_seed = 0;
  cmd_render->add_option("--volume", render_volume, "Label volume (.lvol.json)")->required();
  cmd_render->add_option("--mu", render_mu, "Attenuation vector JSON")->required();
  cmd_render->add_option("--geom", render_geom, "Biplanar geometry JSON")->required();
  cmd_render->add_option("-o,--output", render_out, "Two output images (.xri.json)")
      ->expected(2)
      ->required();
  cmd_render->add_option("--noise-photons", render_photons,
                         "Poisson noise, expected photons per unit intensity");
  cmd_render->add_option("--seed", render_seed, "Noise seed")->default_val(0);
  add_common(cmd_render, &threads);

  // reconstruct: inverse problem.
  auto* cmd_recon = app.add_subcommand("reconstruct", "Recover per-region attenuation");
  std::string recon_volume, recon_geom, recon_config, recon_out;
  std::vector<std::string> recon_views;
  cmd_recon->add_option("--volume", recon_volume, "Label volume (.lvol.json)")->required();
  cmd_recon->add_option("--views", recon_views, "Two measured images (.xri.json)")
      ->expected(2)
      ->required();
  cmd_recon->add_option("--geom", recon_geom, "Biplanar geometry JSON")->required();
  cmd_recon->add_option("--config", recon_config, "Optimizer config JSON");
  cmd_recon->add_option("-o,--output", recon_out, "Result JSON")->required();
  add_common(cmd_recon, &threads);

  // density: result + labels to a density field.
  auto* cmd_density = app.add_subcommand("density", "Expand a result into a density field");
  std::string density_volume, density_result, density_out, density_mode = "universal";
  cmd_density->add_option("--volume", density_volume, "Label volume (.lvol.json)")->required();
  cmd_density->add_option("--result", density_result, "Reconstruction result JSON")->required();
  cmd_density->add_option("--mac-mode", density_mode,
                          "universal (rho = mu/0.17) or per-material (classified MAC)");
  cmd_density->add_option("-o,--output", density_out, "Output density field (.dvol.json)")
      ->required();
  add_common(cmd_density, &threads);

  // eval: density MAPE over non-air voxels plus optional per-view RMSE.
  auto* cmd_eval = app.add_subcommand("eval", "Score a predicted density field");
  std::string eval_pred, eval_ref, eval_volume, eval_out;
  std::vector<std::string> eval_pred_views, eval_ref_views;
  cmd_eval->add_option("--pred", eval_pred, "Predicted density field (.dvol.json)")->required();
  cmd_eval->add_option("--ref", eval_ref, "Reference density field (.dvol.json)")->required();
  cmd_eval->add_option("--volume", eval_volume, "Label volume defining the non-air mask")
      ->required();
  cmd_eval->add_option("--pred-views", eval_pred_views, "Predicted images for RMSE");
  cmd_eval->add_option("--ref-views", eval_ref_views, "Reference images for RMSE");
  cmd_eval->add_option("-o,--output", eval_out, "Report path (default stdout)");
  add_common(cmd_eval, &threads);

  // massprops: density field to mass, CoM, inertia.
  auto* cmd_mass = app.add_subcommand("massprops", "Mass properties of a density field");
  std::string mass_density, mass_out;
  bool mass_exclude_nan = false;
  cmd_mass->add_option("--density", mass_density, "Density field (.dvol.json)")->required();
  cmd_mass->add_flag("--exclude-nan", mass_exclude_nan, "Skip unidentifiable voxels");
  cmd_mass->add_option("-o,--output", mass_out, "Report path (default stdout)");
  add_common(cmd_mass, &threads);

  // stability: the three manipulation checks.
  auto* cmd_stab = app.add_subcommand("stability", "Quasi-static manipulation checks");
  cmd_stab->require_subcommand(1);
  add_common(cmd_stab, &threads);

  std::string stab_props, stab_out;
  double stab_tol = 1e-6;

  auto* cmd_pick = cmd_stab->add_subcommand("pick", "Grasp moment vs friction torque capacity");
  std::vector<double> pick_point{0, 0, 0}, pick_axis{0, 0, 1};
  double pick_capacity = 0.0;
  cmd_pick->add_option("--props", stab_props, "Mass properties JSON")->required();
  cmd_pick->add_option("--grasp-point", pick_point, "Grasp point, cm")->expected(3)->required();
  cmd_pick->add_option("--grasp-axis", pick_axis, "Grasp axis (unit)")->expected(3)->required();
  cmd_pick->add_option("--capacity", pick_capacity, "Max friction torque, N*cm")->required();
  cmd_pick->add_option("--tol", stab_tol, "Marginal band half-width");
  cmd_pick->add_option("-o,--output", stab_out, "Report path (default stdout)");
  cmd_pick->set_version_flag("--version", xden::kVersionString);

  auto* cmd_place = cmd_stab->add_subcommand("place", "Tilted CoM vs support polygon");
  std::vector<double> place_support, place_axis{0, 1, 0}, place_pivot{0, 0, 0};
  double place_angle_deg = 0.0;
  cmd_place->add_option("--props", stab_props, "Mass properties JSON")->required();
  cmd_place->add_option("--support", place_support, "Ground contact points, x y pairs, cm")
      ->expected(-2)
      ->required();
  cmd_place->add_option("--tilt-axis", place_axis, "Tilt axis (unit)")->expected(3);
  cmd_place->add_option("--tilt-deg", place_angle_deg, "Tilt angle, degrees");
  cmd_place->add_option("--pivot", place_pivot, "Point on the tilt line, cm")->expected(3);
  cmd_place->add_option("--tol", stab_tol, "Marginal band half-width");
  cmd_place->add_option("-o,--output", stab_out, "Report path (default stdout)");
  cmd_place->set_version_flag("--version", xden::kVersionString);

  auto* cmd_push = cmd_stab->add_subcommand("push", "Push overturning vs restoring moment");
  std::vector<double> push_point{0, 0, 0}, push_pivot_pt{0, 0}, push_pivot_dir{1, 0};
  double push_force = 0.0, push_friction = 0.5;
  cmd_push->add_option("--props", stab_props, "Mass properties JSON")->required();
  cmd_push->add_option("--push-point", push_point, "Push contact point, cm")
      ->expected(3)
      ->required();
  cmd_push->add_option("--force", push_force, "Horizontal push force, N")->required();
  cmd_push->add_option("--pivot-point", push_pivot_pt, "Point on the ground pivot edge, cm")
      ->expected(2)
      ->required();
  cmd_push->add_option("--pivot-dir", push_pivot_dir, "Pivot edge direction")->expected(2);
  cmd_push->add_option("--friction", push_friction, "Ground friction coefficient");
  cmd_push->add_option("--tol", stab_tol, "Marginal band half-width");
  cmd_push->add_option("-o,--output", stab_out, "Report path (default stdout)");
  cmd_push->set_version_flag("--version", xden::kVersionString);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  xden::set_max_threads(threads);

  if (*cmd_phantom) {
    return guarded([&] {
      const auto spec = xden::load_phantom_spec(phantom_spec);
      auto [vol, mu] = xden::make_phantom(spec);
      xden::save_volume(vol, phantom_out);
      if (!phantom_mu.empty()) xden::save_attenuation(mu, phantom_mu);
      return kExitOk;
    });
  }

  if (*cmd_voxelize) {
    return guarded([&] {
      const auto mesh = xden::load_obj(vox_mesh);
      const auto vol = xden::voxelize_mesh(mesh, vox_size);
      xden::save_volume(vol, vox_out);
      return kExitOk;
    });
  }

  if (*cmd_geom) {
    return guarded([&] {
      const auto vol = xden::load_volume(geom_volume);
      const auto setup = xden::make_orthogonal_biplanar(
          vol.bounding_box(), geom_resolution, geom_pitch,
          xden::beam_kind_from_string(geom_kind), geom_i0);
      xden::save_biplanar(setup, geom_out);
      return kExitOk;
    });
  }

  if (*cmd_render) {
    return guarded([&] {
      const auto vol = xden::load_volume(render_volume);
      const auto mu = xden::load_attenuation(render_mu);
      const auto setup = xden::load_biplanar(render_geom);
      const auto matrix = xden::build_path_matrix(vol, setup);
      auto [view0, view1] = xden::render(matrix, mu);
      if (cmd_render->count("--noise-photons") > 0) {
        view0 = xden::add_poisson_noise(view0, render_photons, render_seed);
        view1 = xden::add_poisson_noise(view1, render_photons, render_seed + 1);
      }
      xden::save_image(view0, render_out[0]);
      xden::save_image(view1, render_out[1]);
      return kExitOk;
    });
  }

  if (*cmd_recon) {
    return guarded([&] {
      const auto vol = xden::load_volume(recon_volume);
      const auto setup = xden::load_biplanar(recon_geom);
      auto measured = std::make_pair(xden::load_image(recon_views[0]),
                                     xden::load_image(recon_views[1]));
      xden::ReconConfig config;
      if (!recon_config.empty()) config = xden::load_recon_config(recon_config);
      const auto matrix = xden::build_path_matrix(vol, setup);
      const auto result = xden::reconstruct(matrix, measured, config);
      xden::save_recon_result(result, vol, config, recon_out);
      if (!result.converged) {
        std::fprintf(stderr, "warning: stopped after %d iterations without converging\n",
                     result.iterations_run);
        return kExitNoConvergence;
      }
      return kExitOk;
    });
  }

  if (*cmd_density) {
    return guarded([&] {
      const auto vol = xden::load_volume(density_volume);
      const auto result = xden::load_recon_result(density_result);
      xden::MacMode mode;
      if (density_mode == "universal") {
        mode = xden::MacMode::universal;
      } else if (density_mode == "per-material") {
        mode = xden::MacMode::per_material;
      } else {
        throw xden::ValidationError("--mac-mode must be universal or per-material");
      }
      const auto field = xden::build_density_field(vol, result, mode);
      xden::save_density(field, density_out);
      return kExitOk;
    });
  }

  if (*cmd_eval) {
    return guarded([&] {
      const auto pred = xden::load_density(eval_pred);
      const auto ref = xden::load_density(eval_ref);
      const auto vol = xden::load_volume(eval_volume);
      if (eval_pred_views.size() != eval_ref_views.size()) {
        throw xden::ValidationError("--pred-views and --ref-views need the same count");
      }
      const auto report = xden::voxel_mape(pred, ref, xden::non_air_mask(vol));
      std::string rmse = "[";
      for (std::size_t i = 0; i < eval_pred_views.size(); ++i) {
        const double r = xden::projection_rmse(xden::load_image(eval_pred_views[i]),
                                               xden::load_image(eval_ref_views[i]));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", r);
        rmse += buf;
      }
      rmse += "]";
      char body[256];
      std::snprintf(body, sizeof body,
                    "{\n  \"mape\": %.17g,\n  \"masked_voxels\": %zu,\n"
                    "  \"excluded_voxels\": %zu,\n  \"projection_rmse_per_view\": ",
                    report.mape, report.masked_voxels, report.excluded_nan);
      emit(std::string(body) + rmse + "\n}\n", eval_out);
      return kExitOk;
    });
  }

  if (*cmd_mass) {
    return guarded([&] {
      const auto field = xden::load_density(mass_density);
      const auto props = xden::mass_properties(field, mass_exclude_nan);
      emit(xden::mass_properties_to_json(props), mass_out);
      return kExitOk;
    });
  }

  if (*cmd_pick) {
    return guarded([&] {
      const auto props = xden::mass_properties_from_json_file(stab_props);
      const auto report = xden::grasp_stability(props, to_vec3(pick_point), to_vec3(pick_axis),
                                                pick_capacity, stab_tol);
      emit(xden::stability_report_to_json(report), stab_out);
      return kExitOk;
    });
  }

  if (*cmd_place) {
    return guarded([&] {
      const auto props = xden::mass_properties_from_json_file(stab_props);
      if (place_support.size() < 2 || place_support.size() % 2 != 0) {
        throw xden::ValidationError("--support needs x y pairs");
      }
      xden::SupportPolygon support;
      for (std::size_t i = 0; i + 1 < place_support.size(); i += 2) {
        support.points.push_back({place_support[i], place_support[i + 1]});
      }
      xden::Tilt tilt;
      tilt.axis = to_vec3(place_axis);
      tilt.angle_rad = xden::deg_to_rad(place_angle_deg);
      tilt.pivot = to_vec3(place_pivot);
      const auto report = xden::tip_over_check(props, support, tilt, stab_tol);
      emit(xden::stability_report_to_json(report), stab_out);
      return kExitOk;
    });
  }

  if (*cmd_push) {
    return guarded([&] {
      const auto props = xden::mass_properties_from_json_file(stab_props);
      xden::PivotLine2D edge;
      edge.point = {push_pivot_pt[0], push_pivot_pt[1]};
      edge.direction = {push_pivot_dir[0], push_pivot_dir[1]};
      const auto report = xden::push_moment_check(props, to_vec3(push_point), push_force, edge,
                                                  push_friction, stab_tol);
      emit(xden::stability_report_to_json(report), stab_out);
      return kExitOk;
    });
  }

  std::fprintf(stderr, "error: no subcommand\n");
  return kExitValidation;
}

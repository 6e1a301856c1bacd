// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/metrics.hpp"

#include <cmath>
#include <cstdint>

#include <doctest.h>

#include "helpers.hpp"
#include "xden/errors.hpp"

using namespace xden;

TEST_SUITE_BEGIN("metrics");

namespace {

DensityField uniform_field(int n, double value) {
  DensityField field;
  field.nx = field.ny = field.nz = n;
  field.voxel_size = 0.1;
  field.origin = {0, 0, 0};
  field.rho.assign(field.voxel_count(), value);
  return field;
}

std::vector<std::uint8_t> full_mask(const DensityField& field) {
  return std::vector<std::uint8_t>(field.voxel_count(), 1);
}

}  // namespace

TEST_CASE("identical fields score zero error") {
  const DensityField ref = uniform_field(8, 1.0);
  const MapeReport report = voxel_mape(ref, ref, full_mask(ref));
  CHECK(report.mape == 0.0);
  CHECK(report.masked_voxels == 512);
  CHECK(report.excluded_nan == 0);
}

TEST_CASE("a uniform ten percent overshoot scores 0.1") {
  const DensityField ref = uniform_field(8, 2.0);
  DensityField pred = ref;
  for (double& v : pred.rho) v *= 1.1;
  const MapeReport report = voxel_mape(pred, ref, full_mask(ref));
  CHECK(report.mape == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("a constant absolute offset scores offset over reference") {
  const DensityField ref = uniform_field(8, 1.0);
  DensityField pred = ref;
  for (double& v : pred.rho) v += 0.5;
  const MapeReport report = voxel_mape(pred, ref, full_mask(ref));
  CHECK(report.mape == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaling both fields together leaves the score unchanged") {
  const DensityField ref = uniform_field(4, 1.3);
  DensityField pred = ref;
  for (std::size_t i = 0; i < pred.rho.size(); ++i) pred.rho[i] += 0.01 * (i % 5);
  const MapeReport base = voxel_mape(pred, ref, full_mask(ref));

  DensityField ref2 = ref;
  DensityField pred2 = pred;
  for (double& v : ref2.rho) v *= 2.0;
  for (double& v : pred2.rho) v *= 2.0;
  const MapeReport scaled = voxel_mape(pred2, ref2, full_mask(ref2));
  CHECK(scaled.mape == doctest::Approx(base.mape).epsilon(1e-12));
}

TEST_CASE("not-a-number voxels are skipped and counted on either side") {
  const DensityField ref0 = uniform_field(4, 1.0);
  DensityField pred = ref0;
  DensityField ref = ref0;
  pred.rho[3] = std::nan("");
  ref.rho[5] = std::nan("");
  for (double& v : pred.rho) {
    if (!std::isnan(v)) v *= 1.2;
  }
  const MapeReport report = voxel_mape(pred, ref, full_mask(ref));
  CHECK(report.excluded_nan == 2);
  CHECK(report.masked_voxels == 62);
  CHECK(report.mape == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("the mask limits which voxels enter the mean") {
  const DensityField ref = uniform_field(4, 1.0);
  DensityField pred = ref;
  pred.rho[0] = 2.0;  // error 1.0, masked out below
  pred.rho[1] = 1.1;
  std::vector<std::uint8_t> mask(ref.voxel_count(), 0);
  mask[1] = 1;
  mask[2] = 1;
  const MapeReport report = voxel_mape(pred, ref, mask);
  CHECK(report.masked_voxels == 2);
  CHECK(report.mape == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("an all-excluded mask scores zero over zero voxels") {
  const DensityField ref = uniform_field(4, 1.0);
  const MapeReport report = voxel_mape(ref, ref, std::vector<std::uint8_t>(64, 0));
  CHECK(report.mape == 0.0);
  CHECK(report.masked_voxels == 0);
}

TEST_CASE("zero reference voxels inside the mask are rejected with a count") {
  const DensityField pred = uniform_field(4, 1.0);
  DensityField ref = pred;
  ref.rho[10] = 0.0;
  ref.rho[11] = -1.0;
  try {
    voxel_mape(pred, ref, full_mask(ref));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }

  std::vector<std::uint8_t> mask(ref.voxel_count(), 1);
  mask[10] = 0;
  mask[11] = 0;
  CHECK_NOTHROW(voxel_mape(pred, ref, mask));
}

TEST_CASE("field shape and scale mismatches are rejected") {
  const DensityField a = uniform_field(4, 1.0);
  const DensityField b = uniform_field(5, 1.0);
  CHECK_THROWS_AS(voxel_mape(a, b, full_mask(a)), ShapeError);

  DensityField c = a;
  c.voxel_size = 0.2;
  CHECK_THROWS_AS(voxel_mape(a, c, full_mask(a)), ShapeError);
  CHECK_THROWS_AS(voxel_mape(a, a, std::vector<std::uint8_t>(63, 1)), ShapeError);
}

TEST_CASE("label masks select air and regions correctly") {
  LabelVolume vol;
  vol.nx = 4;
  vol.ny = vol.nz = 1;
  vol.voxel_size = 1.0;
  vol.origin = {0, 0, 0};
  vol.labels = {0, 1, 2, 1};
  vol.region_table = {{0, "air"}, {1, "a"}, {2, "b"}};

  CHECK(non_air_mask(vol) == std::vector<std::uint8_t>{0, 1, 1, 1});
  CHECK(region_mask(vol, 1) == std::vector<std::uint8_t>{0, 1, 0, 1});
  CHECK(region_mask(vol, 0) == std::vector<std::uint8_t>{1, 0, 0, 0});
}

TEST_CASE("projection rmse measures the quadratic mean difference") {
  XRayImage a;
  a.width = 10;
  a.height = 10;
  a.intensities.assign(100, 0.7);
  XRayImage b = a;
  CHECK(projection_rmse(a, b) == 0.0);

  for (double& v : b.intensities) v += 0.1;
  CHECK(projection_rmse(a, b) == doctest::Approx(0.1).epsilon(1e-12));

  b = a;
  b.intensities[37] += 0.5;
  CHECK(projection_rmse(a, b) == doctest::Approx(0.5 / 10.0).epsilon(1e-12));

  XRayImage c = a;
  c.width = 5;
  c.height = 20;
  CHECK_THROWS_AS(projection_rmse(a, c), ShapeError);
}

TEST_SUITE_END();

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

// Microbenchmarks for the hot paths: grid traversal, forward rendering,
// objective gradients, noise, and mass properties. Shared inputs are built
// once; each benchmark then measures only its kernel.

#include <random>
#include <utility>

#include <benchmark/benchmark.h>

#include "helpers.hpp"
#include "xden/attenuation.hpp"
#include "xden/geometry.hpp"
#include "xden/physics.hpp"
#include "xden/raytrace.hpp"
#include "xden/recon.hpp"
#include "xden/volume.hpp"
#include "xden/xray.hpp"

namespace {

struct BenchScene {
  xden::LabelVolume vol;
  xden::AttenuationVector truth;
  xden::BiplanarSetup setup;
  xden::PathLengthMatrix matrix;
  std::pair<xden::XRayImage, xden::XRayImage> measured;
};

const BenchScene& scene() {
  static const BenchScene s = [] {
    std::mt19937_64 rng(7);
    BenchScene out;
    std::tie(out.vol, out.truth) = xden::make_phantom(xtest::random_phantom_spec(rng, 4, 12.0, 128));
    out.setup = xden::make_orthogonal_biplanar(out.vol.bounding_box(), 128, 0.1,
                                               xden::BeamKind::parallel, 1.0);
    out.matrix = xden::build_path_matrix(out.vol, out.setup);
    out.measured = xden::render(out.matrix, out.truth);
    return out;
  }();
  return s;
}

void BM_TraceRegionLengths(benchmark::State& state) {
  const auto& s = scene();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (auto _ : state) {
    xden::Ray ray;
    ray.origin = {u(rng), u(rng), -20.0};
    ray.direction = xden::Vec3{0.02 * u(rng), 0.02 * u(rng), 1.0}.normalized();
    benchmark::DoNotOptimize(xden::trace_region_lengths(s.vol, ray));
  }
}
BENCHMARK(BM_TraceRegionLengths);

void BM_BuildPathMatrix(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(xden::build_path_matrix(s.vol, s.setup));
  }
}
BENCHMARK(BM_BuildPathMatrix)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(xden::render(s.matrix, s.truth));
  }
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

void BM_Objective(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xden::objective(s.truth, s.matrix, s.measured, xden::LossDomain::intensity));
  }
}
BENCHMARK(BM_Objective)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
  const auto& s = scene();
  xden::AttenuationVector probe = s.truth;
  for (std::size_t k = 1; k < probe.region_count(); ++k) probe.mu[k] *= 1.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xden::gradient(probe, s.matrix, s.measured, xden::LossDomain::intensity));
  }
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMillisecond);

void BM_PoissonNoise(benchmark::State& state) {
  const auto& s = scene();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xden::add_poisson_noise(s.measured.first, 1e5, ++seed));
  }
}
BENCHMARK(BM_PoissonNoise)->Unit(benchmark::kMillisecond);

void BM_MassProperties(benchmark::State& state) {
  static const xden::DensityField field = xtest::analytic_density(
      64, 2.0, [](const xden::Vec3& p) { return p.norm() <= 1.0; }, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xden::mass_properties(field));
  }
}
BENCHMARK(BM_MassProperties)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

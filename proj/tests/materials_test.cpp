// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/materials.hpp"

#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "xden/errors.hpp"

using namespace xden;

TEST_SUITE_BEGIN("materials");

TEST_CASE("builtin table holds the eight reference rows") {
  const MaterialTable& table = builtin_table();
  REQUIRE(table.size() == 8);
  CHECK(find_material(table, "Water")->lac == doctest::Approx(0.17));
  CHECK(find_material(table, "Water")->density == doctest::Approx(1.00));
  CHECK(find_material(table, "Air")->lac == doctest::Approx(1.8e-4));
  CHECK(find_material(table, "Air")->density == doctest::Approx(0.0012));
  CHECK(find_material(table, "Glass")->lac == doctest::Approx(0.432));
  CHECK(find_material(table, "Plastic-PP")->lac == doctest::Approx(0.16));
  CHECK(find_material(table, "Plastic-PVC")->lac == doctest::Approx(0.25));
  CHECK(find_material(table, "Rubber")->lac == doctest::Approx(0.22));
  CHECK(find_material(table, "Wood")->lac == doctest::Approx(0.12));
  CHECK(find_material(table, "Aluminum")->lac == doctest::Approx(0.51));
  CHECK(find_material(table, "Aluminum")->density == doctest::Approx(2.70));
}

TEST_CASE("every row satisfies lac = mac * density within print precision") {
  for (const Material& m : builtin_table()) {
    CHECK(std::abs(m.lac - m.mac * m.density) <= 0.01);
  }
  // Glass is an exact product of its printed values
  const Material* glass = find_material(builtin_table(), "Glass");
  CHECK(glass->mac * glass->density == doctest::Approx(glass->lac).epsilon(1e-12));
}

TEST_CASE("classification retrieves each material from its own lac") {
  for (const Material& m : builtin_table()) {
    CHECK(classify_by_lac(m.lac).material.name == m.name);
    CHECK(classify_by_lac(m.lac).distance == doctest::Approx(0.0));
  }
}

TEST_CASE("classification nearest-neighbor cases") {
  CHECK(classify_by_lac(0.17).material.name == "Water");
  CHECK(classify_by_lac(0.50).material.name == "Aluminum");
  CHECK(classify_by_lac(0.0).material.name == "Air");
  CHECK_THROWS_AS(classify_by_lac(-0.1), ValidationError);
}

TEST_CASE("user table rows extend the builtin set") {
  xtest::TempDir tmp("materials");
  const std::string path = tmp.file("extra.json");
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fputs(R"([{"name":"Bone","formula":"Ca10(PO4)6(OH)2","mac":0.186,"density":1.85,"lac":0.344}])",
             f);
  std::fclose(f);
  const MaterialTable table = load_material_table(path);
  CHECK(table.size() == 9);
  CHECK(find_material(table, "Bone")->lac == doctest::Approx(0.344));
  CHECK(classify_by_lac(0.34, table).material.name == "Bone");
}

TEST_CASE("inconsistent or duplicate user rows are rejected") {
  xtest::TempDir tmp("materials_bad");
  const std::string bad = tmp.file("bad.json");
  std::FILE* f = std::fopen(bad.c_str(), "w");
  // lac far from mac * density
  std::fputs(R"([{"name":"Junk","formula":"?","mac":0.2,"density":1.0,"lac":0.9}])", f);
  std::fclose(f);
  CHECK_THROWS_AS(load_material_table(bad), ValidationError);

  const std::string dup = tmp.file("dup.json");
  f = std::fopen(dup.c_str(), "w");
  std::fputs(R"([{"name":"Water","formula":"H2O","mac":0.17,"density":1.0,"lac":0.17}])", f);
  std::fclose(f);
  CHECK_THROWS_AS(load_material_table(dup), ValidationError);
}

TEST_SUITE_END();

// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/math.hpp"

#include <cmath>

#include <doctest.h>

using namespace xden;

TEST_SUITE_BEGIN("math");

TEST_CASE("vector algebra basics") {
  const Vec3 a{1, 2, 3};
  const Vec3 b{-2, 0.5, 4};
  CHECK(a.dot(b) == doctest::Approx(11.0));
  const Vec3 c = a.cross(b);
  CHECK(c.dot(a) == doctest::Approx(0.0));
  CHECK(c.dot(b) == doctest::Approx(0.0));
  CHECK(Vec3{3, 4, 0}.norm() == doctest::Approx(5.0));
  CHECK(Vec3{0, 0, 7}.normalized().z == doctest::Approx(1.0));
  CHECK(a.at(0) == 1.0);
  CHECK(a.at(2) == 3.0);
  CHECK(a[1] == 2.0);
}

TEST_CASE("rotation matrices are orthonormal and compose") {
  const Vec3 axis = Vec3{1, 1, 1}.normalized();
  const Mat3 r = Mat3::rotation(axis, 0.7);
  const Mat3 rt = r.transposed();
  const Mat3 id = r * rt;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(id.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  // rotation about z by 90 degrees maps x to y
  const Mat3 rz = Mat3::rotation({0, 0, 1}, deg_to_rad(90));
  const Vec3 y = rz * Vec3{1, 0, 0};
  CHECK(y.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(y.y == doctest::Approx(1.0));
  // axis itself is fixed
  const Vec3 fixed = r * axis;
  CHECK((fixed - axis).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("box center extent and corners") {
  const Box box{{-1, -2, -3}, {1, 2, 3}};
  CHECK(box.center() == Vec3{0, 0, 0});
  CHECK(box.extent() == Vec3{2, 4, 6});
  CHECK(box.half_diagonal() == doctest::Approx(0.5 * std::sqrt(4.0 + 16.0 + 36.0)));
  CHECK_FALSE(box.degenerate());
  CHECK(Box{{0, 0, 0}, {1, 1, 0}}.degenerate());
  const auto corners = box.corners();
  CHECK(corners.size() == 8);
  double sx = 0;
  for (const Vec3& c : corners) sx += c.x;
  CHECK(sx == doctest::Approx(0.0));
}

TEST_CASE("degree and radian conversions invert") {
  CHECK(rad_to_deg(deg_to_rad(123.4)) == doctest::Approx(123.4));
  CHECK(deg_to_rad(180.0) == doctest::Approx(3.14159265358979323846));
}

TEST_SUITE_END();

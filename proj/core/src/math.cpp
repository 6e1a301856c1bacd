// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/math.hpp"

namespace xden {

Mat3 Mat3::rotation(const Vec3& axis, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  const double t = 1.0 - c;
  const Vec3 a = axis;
  Mat3 r;
  r.m[0] = {t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y};
  r.m[1] = {t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x};
  r.m[2] = {t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c};
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
  return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += m[i][k] * o.m[k][j];
      r.m[i][j] = acc;
    }
  return r;
}

std::array<Vec3, 8> Box::corners() const {
  return {Vec3{min.x, min.y, min.z}, Vec3{max.x, min.y, min.z},
          Vec3{min.x, max.y, min.z}, Vec3{max.x, max.y, min.z},
          Vec3{min.x, min.y, max.z}, Vec3{max.x, min.y, max.z},
          Vec3{min.x, max.y, max.z}, Vec3{max.x, max.y, max.z}};
}

}  // namespace xden

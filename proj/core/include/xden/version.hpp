// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace xden {

inline constexpr int kVersionMajor = 0;
inline constexpr int kVersionMinor = 1;
inline constexpr int kVersionPatch = 0;
inline constexpr const char* kVersionString = "0.1.0";

}  // namespace xden

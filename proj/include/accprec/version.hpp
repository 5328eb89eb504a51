// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

namespace accprec {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

}  // namespace accprec

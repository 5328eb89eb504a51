// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

namespace accprec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;          // malformed command line
inline constexpr int kExitConfig = 3;         // well-formed but invalid setup
inline constexpr int kExitUnsatisfiable = 4;  // no precision in range works

}  // namespace accprec

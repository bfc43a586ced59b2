// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace adaptmol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the command line `argv` (argv[0] is the program name). Returns
/// 0 on success, 1 on a usage or configuration error, 2 on a data or format error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adaptmol

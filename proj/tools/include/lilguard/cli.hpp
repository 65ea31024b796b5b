// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lilguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitPlateau = 3;
inline constexpr int kExitUsage = 64;

/// Entry point of the `lilguard` tool. `args` excludes the program name.
/// Machine-readable output goes to `out`, human-readable notes to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace lilguard::cli

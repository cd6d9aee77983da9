#pragma once

namespace lcm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitInconclusive = 3;

/// Batch front end. Exit 0 on success, 2 on invalid config, 3 when --strict
/// is set and the verdict is inconclusive.
int run(int argc, char** argv);

}  // namespace lcm

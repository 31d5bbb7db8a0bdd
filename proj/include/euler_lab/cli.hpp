#pragma once

namespace euler_lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

/// Entry point of the euler_lab tool. Returns the process exit code:
/// 0 success, 2 validation failure, 3 non-convergence (1 for I/O errors).
int run_cli(int argc, char** argv);

}  // namespace euler_lab

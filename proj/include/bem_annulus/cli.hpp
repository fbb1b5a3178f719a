#pragma once

#include "bem_annulus/oracle.hpp"

namespace bem::cli {

// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kOracleMismatch = 1,
  kUsage = 2,
  kInputData = 3,
  kNumerical = 4,
};

struct Hooks {
  oracle::KernelFunctions kernels = oracle::closed_form_kernels();
};

int run(int argc, char** argv, const Hooks& hooks = {});

}  // namespace bem::cli

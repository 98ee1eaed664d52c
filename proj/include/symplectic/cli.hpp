#pragma once

// Subcommand runner behind the `symplectic` executable.
//
//   symplectic integrate    --config run.cfg --out out/
//   symplectic bench-energy --config fpu.cfg --out out/ --threads 4
//   symplectic carleman     --config fpu2.cfg
//   symplectic verify       --suite rkg
//   symplectic dump-matrix  --config run.cfg --what history

#include <iosfwd>

namespace symplectic {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailure = 1,
  kExitConfigError = 2,
  kExitCapabilityError = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace symplectic

#pragma once

#include <string>
#include <vector>

namespace rdciag::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  long cases = 0;
  std::string details;
};

// The property suite behind the `check` subcommand: operator calculus,
// conjugate/prox identities, reduction lattice, theoretical constants and
// the theory checkers on desk-scale instances. filter selects checks whose
// name contains it.
std::vector<CheckResult> run_all(const std::string& filter = "");

}  // namespace rdciag::checks

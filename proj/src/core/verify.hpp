#ifndef FG_VERIFY_HPP
#define FG_VERIFY_HPP

#include <string>
#include <vector>

#include "config.hpp"

namespace fg {

struct InvariantResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;   // suite-specific worst-case witness value
  std::string detail;   // what the worst value measures / where it occurred
};

struct NotReproduced {
  std::string claim;
  std::string replacement;
};

struct VerifyReport {
  std::vector<InvariantResult> invariants;
  std::vector<NotReproduced> not_reproduced;
  bool all_passed = false;
};

// Runs every invariant suite whose name starts with cfg.only (all when
// empty).  cfg.fault injects a named defect; "k-sign" flips the sign of the
// Bogolubov kernel during construction.
VerifyReport run_verify(const RunConfig& cfg);

std::string render_verify(const VerifyReport& report, const RunConfig& cfg);

}  // namespace fg

#endif

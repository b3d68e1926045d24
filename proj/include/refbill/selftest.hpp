#pragma once

#include <ostream>

namespace refbill {

// Runs the anchored verification suite (closed-form anchors, conservation
// laws, map symmetries, determinism) printing one PASS/FAIL line per check.
// Returns the number of failed checks.
int run_selftest(std::ostream& os);

}  // namespace refbill

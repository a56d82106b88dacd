#pragma once

// Runs the selected checks over every configured chart and assembles the
// order-normalized report.

#include "slantlab/config.hpp"
#include "slantlab/report.hpp"

namespace slantlab {

/// Chart name used for the probe entry when no reverse candidate is configured.
inline constexpr const char* kNoCandidatesChart = "reverse_candidates";

/// `threads` = 0 uses the hardware concurrency.
Report run(const RunConfig& cfg, unsigned threads = 0);

}  // namespace slantlab

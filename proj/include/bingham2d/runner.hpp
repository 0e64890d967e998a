#pragma once

#include "bingham2d/config.hpp"

namespace bingham2d {

// Dispatches the configured run and writes all artifacts under cfg.out_dir.
// Returns the process exit status: 0 success, 1 invalid configuration
// (message on stderr names the violated invariant), 2 a solver failed to
// converge (artifacts are still written).
int run_config(const RunConfig& cfg);

}  // namespace bingham2d

#pragma once

#include <functional>
#include <vector>

#include "implang/harness/config.hpp"
#include "implang/harness/orchestrate.hpp"

namespace implang::harness {

struct SuiteResult {
  std::vector<RunManifest> manifests;  // schedule order
  int completed = 0;
  int failed = 0;
  int skipped = 0;  // already completed with the same config hash
};

using Progress = std::function<void(const RunManifest&, bool skipped)>;

/// Runs the schedule on `parallel` workers. Runs whose stored manifest is
/// complete and carries the same config hash are not repeated. A
/// ConfigError in any run stops the suite and is rethrown.
SuiteResult run_suite(const std::vector<RunConfig>& runs, int parallel, const RunContext& ctx,
                      const Progress& progress = {});

}  // namespace implang::harness

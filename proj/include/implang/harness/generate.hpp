#pragma once

#include <filesystem>
#include <vector>

#include "implang/harness/config.hpp"

namespace implang::harness {

/// Writes <out>/<experiment>/stimuli/<run_id>.json (and the grammar file for
/// syntax runs). Returns the paths written.
std::vector<std::filesystem::path> write_stimuli(const RunConfig& cfg);

}  // namespace implang::harness

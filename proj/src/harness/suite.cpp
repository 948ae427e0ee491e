#include "implang/harness/suite.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace implang::harness {

namespace {

std::optional<RunManifest> reusable(const RunConfig& cfg) {
  const auto dir = cfg.run_dir();
  if (!std::filesystem::exists(dir / kManifestFile)) return std::nullopt;
  try {
    auto m = read_manifest(dir);
    if (m.config_hash == cfg.config_hash() && manifest_complete(m, dir)) return m;
  } catch (const std::exception&) {
    // unreadable manifest: run again
  }
  return std::nullopt;
}

}  // namespace

SuiteResult run_suite(const std::vector<RunConfig>& runs, int parallel, const RunContext& ctx,
                      const Progress& progress) {
  std::vector<std::optional<RunManifest>> slots(runs.size());
  std::vector<char> skipped(runs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    for (;;) {
      if (stop) return;
      const std::size_t i = next++;
      if (i >= runs.size()) return;
      try {
        auto m = reusable(runs[i]);
        const bool skip = m.has_value();
        if (!m) m = orchestrate_run(runs[i], ctx);
        std::lock_guard lock(mu);
        slots[i] = std::move(m);
        skipped[i] = skip;
        if (progress) progress(*slots[i], skip);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };

  const int width = std::max(1, std::min<int>(parallel, static_cast<int>(runs.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  SuiteResult out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& m = *slots[i];
    if (skipped[i]) ++out.skipped;
    if (m.status == RunStatus::completed) ++out.completed;
    else ++out.failed;
    out.manifests.push_back(m);
  }
  return out;
}

}  // namespace implang::harness

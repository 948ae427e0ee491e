#include "implang/harness/generate.hpp"

#include "implang/core/files.hpp"
#include "implang/fsg/grammar.hpp"
#include "implang/harness/experiments.hpp"

namespace implang::harness {

std::vector<std::filesystem::path> write_stimuli(const RunConfig& cfg) {
  const auto dir = cfg.out_dir / std::string(to_string(cfg.condition.experiment())) / "stimuli";
  std::vector<std::filesystem::path> written;
  const auto json_path = dir / (cfg.run_id() + ".json");
  atomic_write(json_path, stimuli_json(cfg).dump(2) + "\n");
  written.push_back(json_path);
  if (cfg.condition.experiment() == Experiment::syntax) {
    const auto g = load_grammar(cfg);
    const auto grammar_path = dir / (cfg.condition.label() + ".grammar");
    atomic_write(grammar_path, fsg::format_grammar(g));
    written.push_back(grammar_path);
  }
  return written;
}

}  // namespace implang::harness

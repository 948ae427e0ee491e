#include "implang/harness/config.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>

#include "implang/core/errors.hpp"
#include "implang/core/rng.hpp"

namespace implang::harness {

namespace pt = boost::property_tree;
using learners::LearnerConfig;

namespace {

constexpr int kOrders = 3;

std::string opt_path(const std::optional<std::filesystem::path>& p) {
  return p ? p->generic_string() : "";
}

template <class T>
T get_as(const pt::ptree& node, const std::string& key) {
  try {
    return node.get_value<T>();
  } catch (const pt::ptree_error&) {
    throw ConfigError("bad value for " + key + ": '" + node.data() + "'");
  }
}

bool get_bool(const pt::ptree& node, const std::string& key) {
  const auto v = node.data();
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

std::string RunConfig::run_id() const {
  return fmt::format("{}-{}-run{:02}", to_string(condition.experiment()), condition.label(), run_index);
}

std::filesystem::path RunConfig::run_dir() const {
  return out_dir / std::string(to_string(condition.experiment())) / "runs" / run_id();
}

std::string RunConfig::canonical() const {
  std::string s;
  auto kv = [&](std::string_view k, const auto& v) { s += fmt::format("{}={}\n", k, v); };
  kv("condition", condition.str());
  kv("run_index", run_index);
  kv("order_index", order_index);
  kv("stimulus_seed", seeds.stimulus_seed);
  kv("order_seed", seeds.order_seed);
  kv("learner_seed", seeds.learner_seed);
  kv("learner", learner_spec(learner));
  if (learner.kind == LearnerConfig::Kind::remote_chat) {
    kv("endpoint", learner.endpoint);
    kv("temperature", learner.temperature);
    kv("top_p", learner.top_p);
    kv("reasoning_effort", learner.reasoning_effort.value_or(""));
  }
  for (const auto& [k, v] : learner.baseline_params) kv("param." + k, v);
  switch (condition.experiment()) {
    case Experiment::morphology:
      kv("annotation_overrides", opt_path(options.annotation_overrides));
      break;
    case Experiment::morphosyntax:
      kv("printed_type2", options.printed_type2);
      kv("reuse_training_items", options.reuse_training_items);
      kv("probe_overrides", opt_path(options.probe_overrides));
      break;
    case Experiment::syntax:
      kv("n_blocks", options.block_plan.n_blocks);
      kv("pairs_per_block", options.block_plan.pairs_per_block);
      kv("min_length", options.block_plan.length.min);
      kv("max_length", options.block_plan.length.max);
      kv("grammar_a_file", opt_path(options.grammar_a_file));
      kv("grammar_b_file", opt_path(options.grammar_b_file));
      kv("questionnaire_corpus", options.questionnaire_corpus);
      break;
  }
  return s;
}

std::string RunConfig::config_hash() const { return fmt::format("{:016x}", fnv1a64(canonical())); }

void apply_learner_spec(LearnerConfig& cfg, const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "baseline") {
    if (arg.empty()) throw ConfigError("baseline learner needs a name, e.g. baseline:bigram");
    cfg.kind = LearnerConfig::Kind::baseline;
    cfg.model_name = arg;
  } else if (kind == "chat" || kind == "remote_chat") {
    cfg.kind = LearnerConfig::Kind::remote_chat;
    if (!arg.empty()) cfg.model_name = arg;
  } else if (kind == "scripted") {
    cfg.kind = LearnerConfig::Kind::scripted;
    if (!arg.empty()) cfg.baseline_params["script"] = arg;
  } else {
    throw ConfigError("unknown learner spec: " + spec);
  }
}

std::string learner_spec(const LearnerConfig& cfg) {
  switch (cfg.kind) {
    case LearnerConfig::Kind::baseline: return "baseline:" + cfg.model_name;
    case LearnerConfig::Kind::remote_chat: return "chat:" + cfg.model_name;
    case LearnerConfig::Kind::scripted: {
      auto it = cfg.baseline_params.find("script");
      return it == cfg.baseline_params.end() ? "scripted" : "scripted:" + it->second;
    }
  }
  return "?";
}

const std::vector<std::string>& default_script() {
  static const std::vector<std::string> script = {
      "OK.", "ka", "correct", "yes", "incorrect", "no",
      "1. X\n2. V\n3. T\n4. M\n5. V\n6. J\n7. X",
  };
  return script;
}

SuiteSettings default_settings() {
  SuiteSettings s;
  s.learner.kind = LearnerConfig::Kind::baseline;
  s.learner.model_name = "random";
  return s;
}

SuiteSettings load_settings(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  SuiteSettings s = default_settings();
  auto& L = s.learner;
  auto& O = s.options;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key outside a section: " + section);
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (full == "run.seed") s.seed = get_as<std::uint64_t>(node, full);
      else if (full == "run.runs") s.runs_per_cell = get_as<int>(node, full);
      else if (full == "run.parallel") s.parallel = get_as<int>(node, full);
      else if (full == "run.failure_tolerance") s.failure_tolerance = get_as<int>(node, full);
      else if (full == "run.out") s.out_dir = node.data();
      else if (full == "learner.spec") apply_learner_spec(L, node.data());
      else if (full == "learner.model") L.model_name = node.data();
      else if (full == "learner.endpoint") L.endpoint = node.data();
      else if (full == "learner.temperature") L.temperature = get_as<double>(node, full);
      else if (full == "learner.top_p") L.top_p = get_as<double>(node, full);
      else if (full == "learner.reasoning_effort") {
        if (node.data().empty()) L.reasoning_effort.reset();
        else L.reasoning_effort = node.data();
      }
      else if (full == "learner.timeout") L.timeout_s = get_as<double>(node, full);
      else if (full == "learner.max_retries") L.max_retries = get_as<int>(node, full);
      else if (full == "learner.api_key_env") L.api_key_env = node.data();
      else if (full == "learner.max_in_flight") L.max_in_flight = get_as<int>(node, full);
      else if (full == "learner.backoff_initial_ms")
        L.backoff.initial = std::chrono::milliseconds(get_as<long>(node, full));
      else if (full == "learner.backoff_cap_ms")
        L.backoff.cap = std::chrono::milliseconds(get_as<long>(node, full));
      else if (full == "learner.backoff_factor") L.backoff.factor = get_as<double>(node, full);
      else if (full == "learner.script") L.baseline_params["script"] = node.data();
      else if (full == "learner.fail_after") L.baseline_params["fail_after"] = node.data();
      else if (full == "morphology.annotation_overrides") O.annotation_overrides = node.data();
      else if (full == "morphosyntax.printed_type2") O.printed_type2 = get_bool(node, full);
      else if (full == "morphosyntax.reuse_training_items") O.reuse_training_items = get_bool(node, full);
      else if (full == "morphosyntax.probe_overrides") O.probe_overrides = node.data();
      else if (full == "syntax.n_blocks") O.block_plan.n_blocks = get_as<int>(node, full);
      else if (full == "syntax.pairs_per_block") O.block_plan.pairs_per_block = get_as<int>(node, full);
      else if (full == "syntax.min_length") O.block_plan.length.min = get_as<int>(node, full);
      else if (full == "syntax.max_length") O.block_plan.length.max = get_as<int>(node, full);
      else if (full == "syntax.grammar_a") O.grammar_a_file = node.data();
      else if (full == "syntax.grammar_b") O.grammar_b_file = node.data();
      else if (full == "syntax.questionnaire_corpus") O.questionnaire_corpus = get_as<int>(node, full);
      else throw ConfigError("unknown config key: " + full);
    }
  }
  if (s.parallel < 1) throw ConfigError("run.parallel must be >= 1");
  if (s.runs_per_cell && *s.runs_per_cell < 1) throw ConfigError("run.runs must be >= 1");
  if (s.failure_tolerance < 0) throw ConfigError("run.failure_tolerance must be >= 0");
  if (O.block_plan.n_blocks < 1 || O.block_plan.pairs_per_block < 1)
    throw ConfigError("syntax block plan must be positive");
  if (O.block_plan.length.min < 1 || O.block_plan.length.max < O.block_plan.length.min)
    throw ConfigError("syntax length range is empty");
  L.validate();
  return s;
}

int default_runs(Experiment e) {
  return e == Experiment::morphosyntax ? 5 : 15;
}

std::vector<RunConfig> schedule(const ConditionId& condition, const SuiteSettings& s) {
  const Experiment e = condition.experiment();
  const int total = s.runs_per_cell.value_or(default_runs(e));
  const int per_order = e == Experiment::morphosyntax ? 1 : std::max(1, (total + kOrders - 1) / kOrders);
  std::vector<RunConfig> out;
  for (int i = 0; i < total; ++i) {
    RunConfig rc;
    rc.condition = condition;
    rc.learner = s.learner;
    rc.options = s.options;
    rc.out_dir = s.out_dir;
    rc.run_index = i + 1;
    // morphosyntax: every run gets its own stimulus set
    rc.order_index = e == Experiment::morphosyntax ? i : i / per_order;
    const auto cond_key = condition.str();
    const auto oi = static_cast<std::uint64_t>(rc.order_index);
    switch (e) {
      case Experiment::morphology:
        // one test-item order per condition, 3 paragraph orders
        rc.seeds.stimulus_seed = derive_seed(s.seed, "stimulus:" + cond_key, 0);
        rc.seeds.order_seed = derive_seed(s.seed, "order:" + cond_key, oi);
        break;
      case Experiment::morphosyntax:
      case Experiment::syntax:
        rc.seeds.stimulus_seed = derive_seed(s.seed, "stimulus:" + cond_key, oi);
        rc.seeds.order_seed = rc.seeds.stimulus_seed;
        break;
    }
    rc.seeds.learner_seed = derive_seed(s.seed, "learner:" + cond_key, static_cast<std::uint64_t>(i));
    out.push_back(std::move(rc));
  }
  return out;
}

std::vector<RunConfig> schedule(Experiment e, const SuiteSettings& s,
                                const std::vector<std::string>& conditions) {
  std::vector<RunConfig> out;
  for (auto label : valid_conditions(e)) {
    if (!conditions.empty() &&
        std::find(conditions.begin(), conditions.end(), std::string(label)) == conditions.end())
      continue;
    auto part = schedule(ConditionId(e, label), s);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  for (const auto& c : conditions) ConditionId(e, c);  // rejects unknown labels
  return out;
}

}  // namespace implang::harness

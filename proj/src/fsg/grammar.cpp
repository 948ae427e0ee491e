#include "implang/fsg/grammar.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "implang/core/text.hpp"

namespace implang::fsg {

Fsg::Fsg(std::string name, std::vector<std::string> states, int start, std::vector<Edge> edges,
         std::vector<int> exits)
    : name_(std::move(name)), states_(std::move(states)), start_(start), exits_(std::move(exits)) {
  const int n = num_states();
  auto check_state = [&](int s) {
    if (s < 0 || s >= n) throw std::invalid_argument("state index out of range");
  };
  check_state(start_);
  if (exits_.empty()) throw std::invalid_argument("grammar has no exit state");
  exit_.assign(static_cast<std::size_t>(n), false);
  for (int e : exits_) {
    check_state(e);
    exit_[static_cast<std::size_t>(e)] = true;
  }
  for (const Edge& e : edges) {
    check_state(e.from);
    check_state(e.to);
    if (kLetters.find(e.letter) == std::string_view::npos) {
      throw std::invalid_argument(std::string("letter '") + e.letter + "' is not in the alphabet");
    }
  }
  // canonical order so the rendered vocabulary does not depend on edge order
  for (char c : kLetters) {
    if (std::any_of(edges.begin(), edges.end(), [c](const Edge& e) { return e.letter == c; }))
      alphabet_.push_back(c);
  }
  edges_ = std::move(edges);
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) { return a.from < b.from; });
  first_edge_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges_) ++first_edge_[static_cast<std::size_t>(e.from) + 1];
  for (std::size_t i = 1; i < first_edge_.size(); ++i) first_edge_[i] += first_edge_[i - 1];

  // forward reachability from start
  std::vector<bool> reach(static_cast<std::size_t>(n), false);
  std::vector<int> stack{start_};
  reach[static_cast<std::size_t>(start_)] = true;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (const Edge& e : outgoing(s)) {
      if (!reach[static_cast<std::size_t>(e.to)]) {
        reach[static_cast<std::size_t>(e.to)] = true;
        stack.push_back(e.to);
      }
    }
  }
  // backward reachability to an exit, by fixpoint
  std::vector<bool> coreach = exit_;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : edges_) {
      if (coreach[static_cast<std::size_t>(e.to)] && !coreach[static_cast<std::size_t>(e.from)]) {
        coreach[static_cast<std::size_t>(e.from)] = true;
        changed = true;
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (!reach[static_cast<std::size_t>(s)]) {
      throw std::invalid_argument("state " + state_name(s) + " is unreachable from start");
    }
    if (!coreach[static_cast<std::size_t>(s)]) {
      throw std::invalid_argument("state " + state_name(s) + " cannot reach an exit");
    }
  }
}

std::span<const Edge> Fsg::outgoing(int state) const {
  const auto s = static_cast<std::size_t>(state);
  return std::span<const Edge>(edges_).subspan(first_edge_[s], first_edge_[s + 1] - first_edge_[s]);
}

namespace {

std::vector<std::string> numbered_states(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("S" + std::to_string(i));
  return out;
}

}  // namespace

Fsg grammar_a() {
  return Fsg("A", numbered_states(5), 0,
             {{0, 'X', 0}, {0, 'V', 2}, {2, 'J', 1}, {2, 'T', 4},
              {4, 'V', 3}, {3, 'X', 2}, {3, 'J', 3}, {1, 'T', 0}},
             {1, 3, 4});
}

Fsg grammar_b() {
  // S6 has two R-edges (to S7 and S3); kept nondeterministic as drawn.
  return Fsg("B", numbered_states(10), 0,
             {{0, 'M', 1}, {0, 'V', 2}, {1, 'V', 4}, {1, 'X', 6}, {2, 'X', 5},
              {2, 'M', 6}, {3, 'T', 3}, {3, 'M', 1}, {3, 'V', 2}, {4, 'R', 7},
              {4, 'M', 6}, {5, 'T', 8}, {5, 'V', 6}, {6, 'R', 7}, {6, 'R', 3},
              {6, 'T', 8}, {7, 'V', 7}, {7, 'M', 9}, {8, 'R', 8}, {8, 'X', 9}},
             {7, 8, 9});
}

Fsg builtin_grammar(std::string_view name) {
  if (name == "A" || name == "grammarA") return grammar_a();
  if (name == "B" || name == "grammarB") return grammar_b();
  throw std::invalid_argument("unknown grammar '" + std::string(name) + "'");
}

bool accepts(const Fsg& g, std::span<const char> letters) {
  std::vector<bool> current(static_cast<std::size_t>(g.num_states()), false);
  current[static_cast<std::size_t>(g.start())] = true;
  for (char c : letters) {
    std::vector<bool> next(current.size(), false);
    bool any = false;
    for (int s = 0; s < g.num_states(); ++s) {
      if (!current[static_cast<std::size_t>(s)]) continue;
      for (const Edge& e : g.outgoing(s)) {
        if (e.letter == c) {
          next[static_cast<std::size_t>(e.to)] = true;
          any = true;
        }
      }
    }
    if (!any) return false;
    current = std::move(next);
  }
  for (int s = 0; s < g.num_states(); ++s) {
    if (current[static_cast<std::size_t>(s)] && g.is_exit(s)) return true;
  }
  return false;
}

std::optional<std::vector<char>> parse_letters(std::string_view spaced) {
  std::vector<char> out;
  std::istringstream is{std::string(spaced)};
  for (std::string tok; is >> tok;) {
    if (tok.size() != 1) return std::nullopt;
    out.push_back(tok[0]);
  }
  return out;
}

bool accepts(const Fsg& g, std::string_view spaced) {
  const auto letters = parse_letters(spaced);
  return letters && accepts(g, *letters);
}

std::string render(std::span<const char> letters) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += letters[i];
  }
  return out;
}

namespace {

void walk(const Fsg& g, int state, int max_len, std::vector<char>& path,
          std::set<std::string>& out) {
  if (g.is_exit(state) && !path.empty()) out.insert(render(path));
  if (static_cast<int>(path.size()) == max_len) return;
  for (const Edge& e : g.outgoing(state)) {
    path.push_back(e.letter);
    walk(g, e.to, max_len, path, out);
    path.pop_back();
  }
}

}  // namespace

std::set<std::string> enumerate_language(const Fsg& g, int max_len) {
  if (max_len > kMaxEnumerationLength) {
    throw std::invalid_argument("enumerate_language: max_len above " +
                                std::to_string(kMaxEnumerationLength));
  }
  std::set<std::string> out;
  if (max_len < 0) return out;
  std::vector<char> path;
  walk(g, g.start(), max_len, path, out);
  if (g.is_exit(g.start())) out.insert("");
  return out;
}

Fsg parse_grammar(std::istream& in) {
  std::string name = "custom";
  std::optional<std::string> start;
  std::vector<std::string> exit_names;
  std::vector<std::tuple<std::string, char, std::string>> raw_edges;
  std::vector<std::string> states;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& s) {
    const auto [it, inserted] = index.emplace(s, static_cast<int>(states.size()));
    if (inserted) states.push_back(s);
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = text::trim(line);
    if (t.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("grammar line " + std::to_string(line_no) + ": " + why);
    };
    if (const auto colon = t.find(':'); colon != std::string::npos) {
      const std::string key = text::trim(t.substr(0, colon));
      std::istringstream values(t.substr(colon + 1));
      std::vector<std::string> vals;
      for (std::string v; values >> v;) vals.push_back(v);
      if (key == "name" && vals.size() == 1) {
        name = vals[0];
      } else if (key == "start" && vals.size() == 1) {
        start = vals[0];
      } else if (key == "states" && !vals.empty()) {
        for (const auto& v : vals) intern(v);
      } else if (key == "exits" && !vals.empty()) {
        exit_names.insert(exit_names.end(), vals.begin(), vals.end());
      } else {
        fail("unrecognized directive '" + t + "'");
      }
      continue;
    }
    std::istringstream fields(t);
    std::string from, letter, to, extra;
    if (!(fields >> from >> letter >> to) || (fields >> extra) || letter.size() != 1) {
      fail("expected 'STATE LETTER STATE'");
    }
    raw_edges.emplace_back(from, letter[0], to);
  }
  if (!start) throw std::runtime_error("grammar: missing 'start:' line");
  if (exit_names.empty()) throw std::runtime_error("grammar: missing 'exits:' line");

  const int start_index = intern(*start);
  std::vector<Edge> edges;
  for (const auto& [from, letter, to] : raw_edges) {
    const int f = intern(from);
    edges.push_back({f, letter, intern(to)});
  }
  std::vector<int> exits;
  for (const auto& e : exit_names) exits.push_back(intern(e));
  try {
    return Fsg(name, states, start_index, edges, exits);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("grammar: ") + e.what());
  }
}

std::string format_grammar(const Fsg& g) {
  std::ostringstream os;
  os << "name: " << g.name() << "\n";
  os << "states:";
  for (int s = 0; s < g.num_states(); ++s) os << ' ' << g.state_name(s);
  os << "\n";
  os << "start: " << g.state_name(g.start()) << "\n";
  os << "exits:";
  for (int e : g.exits()) os << ' ' << g.state_name(e);
  os << "\n";
  for (const Edge& e : g.edges()) {
    os << g.state_name(e.from) << ' ' << e.letter << ' ' << g.state_name(e.to) << "\n";
  }
  return os.str();
}

}  // namespace implang::fsg

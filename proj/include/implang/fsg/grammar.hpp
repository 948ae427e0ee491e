#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace implang::fsg {

/// Letters any grammar may use.
inline constexpr std::string_view kLetters = "XVTJMR";

struct Edge {
  int from;
  char letter;
  int to;
};

/// Nondeterministic finite-state grammar. Immutable after construction.
class Fsg {
 public:
  /// Throws std::invalid_argument if a letter is outside kLetters, an index is
  /// out of range, there is no exit, or some state is unreachable from start
  /// or cannot reach an exit.
  Fsg(std::string name, std::vector<std::string> states, int start, std::vector<Edge> edges,
      std::vector<int> exits);

  const std::string& name() const { return name_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::string& state_name(int s) const { return states_.at(static_cast<std::size_t>(s)); }
  int start() const { return start_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Edge> outgoing(int state) const;
  bool is_exit(int state) const { return exit_[static_cast<std::size_t>(state)]; }
  const std::vector<int>& exits() const { return exits_; }
  /// Letters used on some edge, in kLetters order.
  const std::vector<char>& alphabet() const { return alphabet_; }

 private:
  std::string name_;
  std::vector<std::string> states_;
  int start_;
  std::vector<Edge> edges_;  // sorted by source state (stable)
  std::vector<std::size_t> first_edge_;
  std::vector<int> exits_;
  std::vector<bool> exit_;
  std::vector<char> alphabet_;
};

Fsg grammar_a();
Fsg grammar_b();
/// "A"/"grammarA" or "B"/"grammarB". Throws std::invalid_argument otherwise.
Fsg builtin_grammar(std::string_view name);

/// Subset simulation: true iff some path from start consumes all letters and
/// ends in an exit state. Letters outside the grammar never match.
bool accepts(const Fsg& g, std::span<const char> letters);
/// Space-separated form ("X X V J"). Tokens that are not single letters give false.
bool accepts(const Fsg& g, std::string_view spaced);
inline bool accepts(const Fsg& g, const char* spaced) { return accepts(g, std::string_view(spaced)); }
inline bool accepts(const Fsg& g, const std::string& spaced) { return accepts(g, std::string_view(spaced)); }

/// Single-letter tokens of a space-separated sentence; nullopt if any token is longer.
std::optional<std::vector<char>> parse_letters(std::string_view spaced);
std::string render(std::span<const char> letters);

inline constexpr int kMaxEnumerationLength = 12;

/// Every accepted string of length <= max_len (space-separated), by
/// exhaustive path search. Throws std::invalid_argument if max_len > 12.
std::set<std::string> enumerate_language(const Fsg& g, int max_len);

/// Editable grammar file:
///   # comment
///   name: A
///   states: S0 S1 S2 S3 S4   (optional; fixes state numbering)
///   start: S0
///   exits: S1 S3 S4
///   S0 X S0
/// Throws std::runtime_error with the line number on malformed input.
Fsg parse_grammar(std::istream& in);
std::string format_grammar(const Fsg& g);

}  // namespace implang::fsg

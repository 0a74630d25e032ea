#pragma once
// Finite automata over structured alphabets: a base alphabet extended with an
// ordered list of boolean tracks. An extended letter (a, b_0 .. b_{T-1}) is
// packed as `base_index << T | bits`, bit j carrying track j.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace origami {

using Letter = std::uint32_t;
using State = std::uint32_t;
using Word = std::vector<Letter>;

class StructuredAlphabet {
 public:
  StructuredAlphabet() = default;
  StructuredAlphabet(std::vector<std::string> base, std::vector<std::string> tracks);

  const std::vector<std::string>& base() const { return base_; }
  const std::vector<std::string>& tracks() const { return tracks_; }
  std::size_t num_tracks() const { return tracks_.size(); }
  std::size_t size() const { return base_.size() << tracks_.size(); }

  Letter letter(std::size_t base_index, std::uint32_t bits) const {
    return static_cast<Letter>((base_index << tracks_.size()) | bits);
  }
  std::size_t base_of(Letter l) const { return l >> tracks_.size(); }
  std::uint32_t bits_of(Letter l) const { return l & ((1u << tracks_.size()) - 1u); }
  bool bit(Letter l, std::size_t track) const { return (l >> track) & 1u; }

  /// Index of a base letter or track name; nullopt when absent.
  std::optional<std::size_t> base_index(std::string_view name) const;
  std::optional<std::size_t> track_index(std::string_view name) const;

  /// `a[0 1]` in track-declaration order; plain `a` without tracks.
  std::string format_letter(Letter l) const;
  std::string format_word(std::span<const Letter> w) const;

  /// Same alphabet with one track removed; letters map via `drop_bit`.
  StructuredAlphabet without_track(std::size_t track) const;

  friend bool operator==(const StructuredAlphabet&, const StructuredAlphabet&) = default;

 private:
  std::vector<std::string> base_;
  std::vector<std::string> tracks_;
};

/// Removes bit `track` from a packed letter, shifting higher bits down.
Letter drop_bit(Letter l, std::size_t track);
/// Inserts bit `value` at position `track`, shifting higher bits up.
Letter insert_bit(Letter l, std::size_t track, bool value);

struct Edge {
  Letter letter;
  State target;
};

/// Non-deterministic automaton. Transitions form a list, so parallel edges
/// (same source, letter and target) count as distinct transitions when runs
/// are counted.
class Nfa {
 public:
  Nfa() = default;
  explicit Nfa(StructuredAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const StructuredAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return out_.size(); }

  State add_state(bool initial = false, bool final = false);
  void set_initial(State s, bool value = true) { initial_.at(s) = value; }
  void set_final(State s, bool value = true) { final_.at(s) = value; }
  void add_transition(State from, Letter letter, State to);

  bool is_initial(State s) const { return initial_[s]; }
  bool is_final(State s) const { return final_[s]; }
  std::vector<State> initial_states() const;
  std::span<const Edge> edges(State s) const { return out_[s]; }
  std::size_t num_transitions() const;

 private:
  StructuredAlphabet alphabet_;
  std::vector<std::vector<Edge>> out_;
  std::vector<char> initial_;
  std::vector<char> final_;
};

/// Complete deterministic automaton with a dense transition table.
class Dfa {
 public:
  Dfa() = default;
  Dfa(StructuredAlphabet alphabet, std::size_t num_states, State initial);

  const StructuredAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return final_.size(); }
  State initial() const { return initial_; }
  bool is_final(State s) const { return final_[s]; }
  void set_final(State s, bool value = true) { final_[s] = value; }
  State step(State s, Letter l) const { return next_[s * alphabet_.size() + l]; }
  void set_step(State s, Letter l, State to) { next_[s * alphabet_.size() + l] = to; }

  State run(std::span<const Letter> w) const;
  bool accepts(std::span<const Letter> w) const { return final_[run(w)]; }

 private:
  StructuredAlphabet alphabet_;
  std::vector<State> next_;
  std::vector<char> final_;
  State initial_ = 0;
};

Nfa to_nfa(const Dfa& d);
Dfa determinize(const Nfa& n);
Dfa minimize(const Dfa& d);
Dfa complement(const Dfa& d);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
/// Product automaton; runs of the result biject with pairs of runs.
Nfa intersect(const Nfa& a, const Nfa& b);
/// Disjoint union.
Nfa unite(const Nfa& a, const Nfa& b);
/// Existential projection of a track (the track is erased from the alphabet).
Nfa project_track(const Nfa& n, std::string_view track);
/// Existential projection followed by subset construction.
Dfa project_track(const Dfa& d, std::size_t track);

bool is_empty(const Nfa& n);
bool is_empty(const Dfa& d);
bool accepts(const Nfa& n, std::span<const Letter> w);
/// Number of accepting runs on `w` (saturating at UINT64_MAX).
std::uint64_t count_runs(const Nfa& n, std::span<const Letter> w);
/// Shortest accepted word, lexicographically least among those.
std::optional<Word> find_witness(const Nfa& n);
std::optional<Word> find_witness(const Dfa& d);
bool equivalent(const Dfa& a, const Dfa& b);

/// Restricts to accessible and co-accessible states.
Nfa trim(const Nfa& n);

/// Reinterprets `d` over `target`, which has the same base alphabet.
/// `track_map[i]` is the target track carrying source track i; target tracks
/// not in the image are unconstrained.
Dfa remap_tracks(const Dfa& d, const StructuredAlphabet& target,
                 std::span<const std::size_t> track_map);

enum class Ambiguity { finite, polynomial, exponential };
std::string_view to_string(Ambiguity a);

/// Structural witness for infinite ambiguity. For the exponential pattern
/// (EDA) `p == q` and `word` labels two distinct cycles on p; for the
/// polynomial pattern (IDA) `word` labels p->p, p->q and q->q.
struct AmbiguityPattern {
  State p = 0;
  State q = 0;
  Word word;
};

struct AmbiguityReport {
  Ambiguity cls = Ambiguity::finite;
  std::optional<AmbiguityPattern> pattern;
};

/// Degree of ambiguity of a trimmed automaton (states that are not both
/// accessible and co-accessible are ignored).
AmbiguityReport ambiguity_class(const Nfa& n);

/// Textual format:
///   alphabet: a b
///   tracks: X y
///   states: p q
///   initial: p
///   final: q
///   p -- a[1 0] --> q
Nfa parse_automaton(std::string_view text);
std::string format_automaton(const Nfa& n);

}  // namespace origami

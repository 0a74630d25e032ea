#pragma once
// One-way and two-way non-deterministic transducers with origin semantics.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace origami {

using Symbol = std::uint32_t;
using SymWord = std::vector<Symbol>;

/// Input word, output word and, for each output position, the 1-based input
/// position that produced it.
struct OriginGraph {
  SymWord input;
  SymWord output;
  std::vector<int> origin;

  friend auto operator<=>(const OriginGraph&, const OriginGraph&) = default;
};

enum class TransducerKind { one_way, two_way };
enum class Direction { left, right };

/// Reads of a transition: an input symbol, or one of these markers.
inline constexpr int kEpsilon = -1;
inline constexpr int kLeftEnd = -2;   // the left endmarker, 2NT only
inline constexpr int kRightEnd = -3;  // the right endmarker, 2NT only

struct Transition {
  std::uint32_t from = 0;
  int read = kEpsilon;
  SymWord output;
  Direction dir = Direction::right;
  std::uint32_t to = 0;
};

struct RunCaps {
  std::size_t max_output = 16;
  std::size_t max_steps = 64;
};

class Transducer {
 public:
  Transducer(TransducerKind kind, std::vector<std::string> input_alphabet,
             std::vector<std::string> output_alphabet);

  TransducerKind kind() const { return kind_; }
  const std::vector<std::string>& input_alphabet() const { return in_; }
  const std::vector<std::string>& output_alphabet() const { return out_; }
  std::size_t num_states() const { return names_.size(); }
  const std::string& state_name(std::uint32_t s) const { return names_[s]; }
  std::optional<std::uint32_t> state_index(std::string_view name) const;

  std::uint32_t add_state(std::string name, bool initial = false, bool final = false);
  void set_initial(std::uint32_t s, bool v = true) { initial_.at(s) = v; }
  void set_final(std::uint32_t s, bool v = true) { final_.at(s) = v; }
  /// Validates the transition against the model (no epsilon for 2NTs,
  /// endmarker moves point inwards and output nothing).
  void add_transition(Transition t);

  bool is_initial(std::uint32_t s) const { return initial_[s]; }
  bool is_final(std::uint32_t s) const { return final_[s]; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Indices of transitions leaving `s` reading `read`.
  const std::vector<std::uint32_t>& outgoing(std::uint32_t s, int read) const;

  std::optional<Symbol> input_symbol(std::string_view name) const;
  std::optional<Symbol> output_symbol(std::string_view name) const;

 private:
  std::size_t slot(std::uint32_t s, int read) const {
    return s * (in_.size() + 3) + static_cast<std::size_t>(read + 3);
  }

  TransducerKind kind_;
  std::vector<std::string> in_, out_;
  std::vector<std::string> names_;
  std::vector<char> initial_, final_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::uint32_t>> index_;
};

struct GraphSet {
  std::vector<OriginGraph> graphs;  // sorted, duplicates removed
  bool pruned = false;              // some run was cut by the caps
};

/// Origin graphs of accepting runs on `input` within the caps.
GraphSet run_origin_graphs(const Transducer& t, const SymWord& input, const RunCaps& caps);
/// Same, restricted to runs producing exactly `output`.
GraphSet run_origin_graphs(const Transducer& t, const SymWord& input, const SymWord& output,
                           const RunCaps& caps);

struct PairSet {
  std::set<std::pair<SymWord, SymWord>> pairs;
  bool pruned = false;
};

/// Input/output pairs over all non-empty inputs up to `max_input_len`.
PairSet classical_pairs(const Transducer& t, std::size_t max_input_len, const RunCaps& caps);

struct EquivalenceResult {
  bool equal = true;
  std::optional<OriginGraph> counterexample;
  int side = 0;  // 1 or 2: which transducer has the counterexample
  bool pruned = false;
};

EquivalenceResult origin_equivalent_upto(const Transducer& a, const Transducer& b,
                                         std::size_t max_input_len, const RunCaps& caps);

/// Calls `f(word)` for every word over `sigma` symbols with length in
/// [min_len, max_len], by length then lexicographically.
template <typename F>
void for_each_word(std::size_t sigma, std::size_t min_len, std::size_t max_len, F f) {
  for (std::size_t n = min_len; n <= max_len; ++n) {
    SymWord w(n, 0);
    for (;;) {
      f(static_cast<const SymWord&>(w));
      std::size_t i = n;
      while (i > 0 && w[i - 1] + 1 == sigma) w[--i] = 0;
      if (i == 0) break;
      ++w[i - 1];
    }
    if (sigma == 0) break;
  }
}

/// Splits a word given as space separated symbols, or, without spaces, by
/// greedy longest match against the alphabet. "eps" and "" are the empty word.
SymWord parse_word(const std::vector<std::string>& alphabet, std::string_view text);
std::string format_word(const std::vector<std::string>& alphabet, const SymWord& w,
                        std::string_view sep = " ");

/// Transducer text format:
///   kind: 1nt            (or 2nt)
///   input-alphabet: a b
///   output-alphabet: c d
///   states: p q
///   initial: p
///   final: q
///   p -- a / c d --> q   (1nt; input may be eps)
///   p -- a / c, R --> q  (2nt; input may be < or >)
Transducer parse_transducer(std::string_view text);
std::string format_transducer(const Transducer& t);

/// Origin graph text format: `input:`, `output:`, `origin:` lines.
OriginGraph parse_origin_graph(const Transducer& t, std::string_view text);
OriginGraph parse_origin_graph(const std::vector<std::string>& in,
                               const std::vector<std::string>& out, std::string_view text);
std::string format_origin_graph(const std::vector<std::string>& in,
                                const std::vector<std::string>& out, const OriginGraph& g);

/// Bipartite DOT drawing: input row on top, output row below, solid origin
/// arrows; a second graph is overlaid with dashed arrows.
std::string origin_graph_dot(const std::vector<std::string>& in, const std::vector<std::string>& out,
                             const OriginGraph& g, const OriginGraph* overlay = nullptr,
                             int highlight = 0);

}  // namespace origami

#include "origami/automata.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "origami/error.hpp"
#include "text_util.hpp"

namespace origami {

// ---------------------------------------------------------------- alphabet

StructuredAlphabet::StructuredAlphabet(std::vector<std::string> base,
                                       std::vector<std::string> tracks)
    : base_(std::move(base)), tracks_(std::move(tracks)) {
  if (base_.empty()) throw Error("structured alphabet: base alphabet is empty");
  if (tracks_.size() > 20) throw Error("structured alphabet: too many tracks");
  auto check_unique = [](const std::vector<std::string>& names, const char* what) {
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(std::string("structured alphabet: duplicate ") + what);
  };
  check_unique(base_, "base letter");
  check_unique(tracks_, "track name");
}

std::optional<std::size_t> StructuredAlphabet::base_index(std::string_view name) const {
  for (std::size_t i = 0; i < base_.size(); ++i)
    if (base_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> StructuredAlphabet::track_index(std::string_view name) const {
  for (std::size_t i = 0; i < tracks_.size(); ++i)
    if (tracks_[i] == name) return i;
  return std::nullopt;
}

std::string StructuredAlphabet::format_letter(Letter l) const {
  std::string out = base_.at(base_of(l));
  if (tracks_.empty()) return out;
  out += '[';
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    if (t) out += ' ';
    out += bit(l, t) ? '1' : '0';
  }
  out += ']';
  return out;
}

std::string StructuredAlphabet::format_word(std::span<const Letter> w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += format_letter(w[i]);
  }
  return out;
}

StructuredAlphabet StructuredAlphabet::without_track(std::size_t track) const {
  std::vector<std::string> tracks = tracks_;
  tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(track));
  return StructuredAlphabet(base_, std::move(tracks));
}

Letter drop_bit(Letter l, std::size_t track) {
  const Letter low = l & ((1u << track) - 1u);
  return ((l >> (track + 1)) << track) | low;
}

Letter insert_bit(Letter l, std::size_t track, bool value) {
  const Letter low = l & ((1u << track) - 1u);
  return ((l >> track) << (track + 1)) | (static_cast<Letter>(value) << track) | low;
}

// --------------------------------------------------------------------- nfa

State Nfa::add_state(bool initial, bool final) {
  out_.emplace_back();
  initial_.push_back(initial);
  final_.push_back(final);
  return static_cast<State>(out_.size() - 1);
}

void Nfa::add_transition(State from, Letter letter, State to) {
  if (from >= out_.size() || to >= out_.size()) throw Error("nfa: state out of range");
  if (letter >= alphabet_.size()) throw Error("nfa: letter outside alphabet");
  out_[from].push_back({letter, to});
}

std::vector<State> Nfa::initial_states() const {
  std::vector<State> out;
  for (State s = 0; s < out_.size(); ++s)
    if (initial_[s]) out.push_back(s);
  return out;
}

std::size_t Nfa::num_transitions() const {
  std::size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

// --------------------------------------------------------------------- dfa

Dfa::Dfa(StructuredAlphabet alphabet, std::size_t num_states, State initial)
    : alphabet_(std::move(alphabet)),
      next_(num_states * alphabet_.size(), 0),
      final_(num_states, 0),
      initial_(initial) {}

State Dfa::run(std::span<const Letter> w) const {
  State s = initial_;
  for (Letter l : w) s = step(s, l);
  return s;
}

Nfa to_nfa(const Dfa& d) {
  Nfa n(d.alphabet());
  for (State s = 0; s < d.num_states(); ++s) n.add_state(s == d.initial(), d.is_final(s));
  const auto sigma = static_cast<Letter>(d.alphabet().size());
  for (State s = 0; s < d.num_states(); ++s)
    for (Letter l = 0; l < sigma; ++l) n.add_transition(s, l, d.step(s, l));
  return n;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<State>& v) const noexcept {
    std::size_t h = v.size();
    for (State s : v) h = h * 1000003u ^ s;
    return h;
  }
};

// Generic subset construction; `post(subset, letter, out)` appends successors.
template <typename Post, typename IsFinal>
Dfa subset_construction(const StructuredAlphabet& alphabet, std::vector<State> start,
                        Post post, IsFinal is_final) {
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  std::unordered_map<std::vector<State>, State, VecHash> index;
  std::vector<std::vector<State>> subsets;
  std::vector<State> table;
  const auto sigma = static_cast<Letter>(alphabet.size());
  index.emplace(start, 0);
  subsets.push_back(start);
  std::vector<State> succ;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (Letter l = 0; l < sigma; ++l) {
      succ.clear();
      post(subsets[i], l, succ);
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      auto [it, inserted] = index.emplace(succ, static_cast<State>(subsets.size()));
      if (inserted) subsets.push_back(succ);
      table.push_back(it->second);
    }
  }
  Dfa d(alphabet, subsets.size(), 0);
  for (State s = 0; s < subsets.size(); ++s) {
    for (Letter l = 0; l < sigma; ++l) d.set_step(s, l, table[s * sigma + l]);
    d.set_final(s, std::any_of(subsets[s].begin(), subsets[s].end(), is_final));
  }
  return d;
}

}  // namespace

Dfa determinize(const Nfa& n) {
  return subset_construction(
      n.alphabet(), n.initial_states(),
      [&](const std::vector<State>& set, Letter l, std::vector<State>& out) {
        for (State s : set)
          for (const Edge& e : n.edges(s))
            if (e.letter == l) out.push_back(e.target);
      },
      [&](State s) { return n.is_final(s); });
}

Dfa project_track(const Dfa& d, std::size_t track) {
  if (track >= d.alphabet().num_tracks()) throw Error("project_track: no such track");
  return subset_construction(
      d.alphabet().without_track(track), {d.initial()},
      [&](const std::vector<State>& set, Letter l, std::vector<State>& out) {
        const Letter l0 = insert_bit(l, track, false);
        const Letter l1 = insert_bit(l, track, true);
        for (State s : set) {
          out.push_back(d.step(s, l0));
          out.push_back(d.step(s, l1));
        }
      },
      [&](State s) { return d.is_final(s); });
}

Dfa minimize(const Dfa& d) {
  const auto sigma = static_cast<Letter>(d.alphabet().size());
  // Keep only reachable states.
  std::vector<State> order{d.initial()};
  std::vector<int> seen(d.num_states(), -1);
  seen[d.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Letter l = 0; l < sigma; ++l) {
      State t = d.step(order[i], l);
      if (seen[t] < 0) {
        seen[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  const std::size_t n = order.size();
  std::vector<State> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = d.is_final(order[i]) ? 1 : 0;
  std::size_t num_classes = 0;
  // Moore refinement: signature = (class, classes of successors).
  for (;;) {
    std::unordered_map<std::vector<State>, State, VecHash> sig_index;
    std::vector<State> next_cls(n);
    std::vector<State> sig(sigma + 1);
    for (std::size_t i = 0; i < n; ++i) {
      sig[0] = cls[i];
      for (Letter l = 0; l < sigma; ++l)
        sig[l + 1] = cls[static_cast<std::size_t>(seen[d.step(order[i], l)])];
      auto [it, _] = sig_index.emplace(sig, static_cast<State>(sig_index.size()));
      next_cls[i] = it->second;
    }
    const std::size_t count = sig_index.size();
    cls = std::move(next_cls);
    if (count == num_classes) break;
    num_classes = count;
  }
  // Renumber so that the initial state is 0 and numbering follows BFS order.
  std::vector<int> renum(num_classes, -1);
  State next_id = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (renum[cls[i]] < 0) renum[cls[i]] = static_cast<int>(next_id++);
  Dfa m(d.alphabet(), num_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<State>(renum[cls[i]]);
    m.set_final(c, d.is_final(order[i]));
    for (Letter l = 0; l < sigma; ++l)
      m.set_step(c, l,
                 static_cast<State>(renum[cls[static_cast<std::size_t>(seen[d.step(order[i], l)])]]));
  }
  return m;
}

Dfa complement(const Dfa& d) {
  Dfa c = d;
  for (State s = 0; s < c.num_states(); ++s) c.set_final(s, !d.is_final(s));
  return c;
}

namespace {

template <typename Combine>
Dfa product(const Dfa& a, const Dfa& b, Combine combine) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch("product: alphabets differ");
  const auto sigma = static_cast<Letter>(a.alphabet().size());
  const std::size_t nb = b.num_states();
  std::unordered_map<std::uint64_t, State> index;
  std::vector<std::pair<State, State>> pairs{{a.initial(), b.initial()}};
  index.emplace(static_cast<std::uint64_t>(a.initial()) * nb + b.initial(), 0);
  std::vector<State> table;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (Letter l = 0; l < sigma; ++l) {
      const State pa = a.step(pairs[i].first, l);
      const State pb = b.step(pairs[i].second, l);
      auto [it, inserted] = index.emplace(static_cast<std::uint64_t>(pa) * nb + pb,
                                          static_cast<State>(pairs.size()));
      if (inserted) pairs.emplace_back(pa, pb);
      table.push_back(it->second);
    }
  }
  Dfa d(a.alphabet(), pairs.size(), 0);
  for (State s = 0; s < pairs.size(); ++s) {
    for (Letter l = 0; l < sigma; ++l) d.set_step(s, l, table[s * sigma + l]);
    d.set_final(s, combine(a.is_final(pairs[s].first), b.is_final(pairs[s].second)));
  }
  return d;
}

}  // namespace

Dfa intersect(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && y; });
}

Dfa unite(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x || y; });
}

Nfa intersect(const Nfa& a, const Nfa& b) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch("intersect: alphabets differ");
  Nfa out(a.alphabet());
  const std::size_t nb = b.num_states();
  for (State p = 0; p < a.num_states(); ++p)
    for (State q = 0; q < nb; ++q)
      out.add_state(a.is_initial(p) && b.is_initial(q), a.is_final(p) && b.is_final(q));
  for (State p = 0; p < a.num_states(); ++p)
    for (State q = 0; q < nb; ++q)
      for (const Edge& ea : a.edges(p))
        for (const Edge& eb : b.edges(q))
          if (ea.letter == eb.letter)
            out.add_transition(static_cast<State>(p * nb + q), ea.letter,
                               static_cast<State>(ea.target * nb + eb.target));
  return trim(out);
}

Nfa unite(const Nfa& a, const Nfa& b) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch("unite: alphabets differ");
  Nfa out(a.alphabet());
  for (State p = 0; p < a.num_states(); ++p) out.add_state(a.is_initial(p), a.is_final(p));
  const auto off = static_cast<State>(a.num_states());
  for (State q = 0; q < b.num_states(); ++q) out.add_state(b.is_initial(q), b.is_final(q));
  for (State p = 0; p < a.num_states(); ++p)
    for (const Edge& e : a.edges(p)) out.add_transition(p, e.letter, e.target);
  for (State q = 0; q < b.num_states(); ++q)
    for (const Edge& e : b.edges(q)) out.add_transition(q + off, e.letter, e.target + off);
  return out;
}

Nfa project_track(const Nfa& n, std::string_view track) {
  const auto t = n.alphabet().track_index(track);
  if (!t) throw Error("project_track: no track named '" + std::string(track) + "'");
  Nfa out(n.alphabet().without_track(*t));
  for (State s = 0; s < n.num_states(); ++s) out.add_state(n.is_initial(s), n.is_final(s));
  for (State s = 0; s < n.num_states(); ++s)
    for (const Edge& e : n.edges(s)) out.add_transition(s, drop_bit(e.letter, *t), e.target);
  return out;
}

// --------------------------------------------------------------- queries

bool is_empty(const Nfa& n) { return !find_witness(n).has_value(); }

bool is_empty(const Dfa& d) { return !find_witness(d).has_value(); }

bool accepts(const Nfa& n, std::span<const Letter> w) { return count_runs(n, w) > 0; }

std::uint64_t count_runs(const Nfa& n, std::span<const Letter> w) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> cur(n.num_states(), 0), nxt;
  for (State s = 0; s < n.num_states(); ++s) cur[s] = n.is_initial(s) ? 1 : 0;
  for (Letter l : w) {
    nxt.assign(n.num_states(), 0);
    for (State s = 0; s < n.num_states(); ++s) {
      if (!cur[s]) continue;
      for (const Edge& e : n.edges(s))
        if (e.letter == l) {
          auto& slot = nxt[e.target];
          slot = (kMax - slot < cur[s]) ? kMax : slot + cur[s];
        }
    }
    cur.swap(nxt);
  }
  std::uint64_t total = 0;
  for (State s = 0; s < n.num_states(); ++s)
    if (n.is_final(s)) total = (kMax - total < cur[s]) ? kMax : total + cur[s];
  return total;
}

std::optional<Word> find_witness(const Nfa& n) {
  // BFS over subsets; FIFO order with letters expanded in increasing order
  // visits words in length-lexicographic order.
  std::vector<State> start = n.initial_states();
  std::unordered_map<std::vector<State>, std::size_t, VecHash> index;
  std::vector<std::vector<State>> subsets{start};
  std::vector<std::pair<std::size_t, Letter>> parent{{0, 0}};
  index.emplace(start, 0);
  auto any_final = [&](const std::vector<State>& s) {
    return std::any_of(s.begin(), s.end(), [&](State q) { return n.is_final(q); });
  };
  auto rebuild = [&](std::size_t i) {
    Word w;
    while (i != 0) {
      w.push_back(parent[i].second);
      i = parent[i].first;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  const auto sigma = static_cast<Letter>(n.alphabet().size());
  std::vector<State> succ;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (any_final(subsets[i])) return rebuild(i);
    if (subsets[i].empty()) continue;
    for (Letter l = 0; l < sigma; ++l) {
      succ.clear();
      for (State s : subsets[i])
        for (const Edge& e : n.edges(s))
          if (e.letter == l) succ.push_back(e.target);
      if (succ.empty()) continue;
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      if (index.emplace(succ, subsets.size()).second) {
        subsets.push_back(succ);
        parent.emplace_back(i, l);
      }
    }
  }
  return std::nullopt;
}

std::optional<Word> find_witness(const Dfa& d) {
  const auto sigma = static_cast<Letter>(d.alphabet().size());
  std::vector<std::int64_t> parent(d.num_states(), -1);
  std::vector<Letter> via(d.num_states(), 0);
  std::deque<State> queue{d.initial()};
  parent[d.initial()] = d.initial();
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    if (d.is_final(s)) {
      Word w;
      for (State c = s; c != d.initial(); c = static_cast<State>(parent[c])) w.push_back(via[c]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Letter l = 0; l < sigma; ++l) {
      const State t = d.step(s, l);
      if (parent[t] < 0) {
        parent[t] = s;
        via[t] = l;
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

bool equivalent(const Dfa& a, const Dfa& b) {
  return is_empty(product(a, b, [](bool x, bool y) { return x != y; }));
}

Nfa trim(const Nfa& n) {
  const std::size_t size = n.num_states();
  std::vector<char> fwd(size, 0), bwd(size, 0);
  std::vector<State> stack;
  for (State s = 0; s < size; ++s)
    if (n.is_initial(s)) {
      fwd[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (const Edge& e : n.edges(s))
      if (!fwd[e.target]) {
        fwd[e.target] = 1;
        stack.push_back(e.target);
      }
  }
  std::vector<std::vector<State>> rev(size);
  for (State s = 0; s < size; ++s)
    for (const Edge& e : n.edges(s)) rev[e.target].push_back(s);
  for (State s = 0; s < size; ++s)
    if (n.is_final(s)) {
      bwd[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : rev[s])
      if (!bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
  }
  Nfa out(n.alphabet());
  std::vector<State> renum(size, 0);
  for (State s = 0; s < size; ++s)
    if (fwd[s] && bwd[s]) renum[s] = out.add_state(n.is_initial(s), n.is_final(s));
  for (State s = 0; s < size; ++s) {
    if (!(fwd[s] && bwd[s])) continue;
    for (const Edge& e : n.edges(s))
      if (fwd[e.target] && bwd[e.target]) out.add_transition(renum[s], e.letter, renum[e.target]);
  }
  return out;
}

Dfa remap_tracks(const Dfa& d, const StructuredAlphabet& target,
                 std::span<const std::size_t> track_map) {
  const StructuredAlphabet& src = d.alphabet();
  if (src.base() != target.base()) throw AlphabetMismatch("remap_tracks: base alphabets differ");
  if (track_map.size() != src.num_tracks()) throw Error("remap_tracks: track map size");
  Dfa out(target, d.num_states(), d.initial());
  const auto sigma = static_cast<Letter>(target.size());
  for (Letter l = 0; l < sigma; ++l) {
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < track_map.size(); ++i)
      if (target.bit(l, track_map[i])) bits |= 1u << i;
    const Letter sl = src.letter(target.base_of(l), bits);
    for (State s = 0; s < d.num_states(); ++s) out.set_step(s, l, d.step(s, sl));
  }
  for (State s = 0; s < d.num_states(); ++s) out.set_final(s, d.is_final(s));
  return out;
}

// -------------------------------------------------------------- ambiguity

std::string_view to_string(Ambiguity a) {
  switch (a) {
    case Ambiguity::finite: return "finite";
    case Ambiguity::polynomial: return "infinite-polynomial";
    case Ambiguity::exponential: return "infinite-exponential";
  }
  return "?";
}

namespace {

// Tarjan SCC over an implicit graph given by adjacency lists.
std::vector<int> scc_ids(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  int counter = 0, comps = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        const std::uint32_t w = adj[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const std::uint32_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comps;
          } while (w != v);
          ++comps;
        }
      }
    }
  }
  return comp;
}

// Edges of a trimmed automaton grouped by letter for pairwise products.
struct LetterIndex {
  explicit LetterIndex(const Nfa& n) : by_state(n.num_states()) {
    for (State s = 0; s < n.num_states(); ++s) {
      auto& v = by_state[s];
      const auto edges = n.edges(s);
      for (std::size_t i = 0; i < edges.size(); ++i) v.push_back({edges[i].letter, edges[i].target, i});
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.letter < b.letter; });
    }
  }
  struct Item {
    Letter letter;
    State target;
    std::size_t id;
  };
  std::vector<std::vector<Item>> by_state;
};

// Calls f(letter, targetA, idA, targetB, idB) for every pair of same-letter edges.
template <typename F>
void for_each_pair(const LetterIndex& ix, State p, State q, F f) {
  const auto& a = ix.by_state[p];
  const auto& b = ix.by_state[q];
  std::size_t j0 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j0 < b.size() && b[j0].letter < a[i].letter) ++j0;
    for (std::size_t j = j0; j < b.size() && b[j].letter == a[i].letter; ++j)
      f(a[i].letter, a[i].target, a[i].id, b[j].target, b[j].id);
  }
}

// BFS path in an explicit labelled graph; returns letters from `from` to `to`.
std::optional<Word> bfs_path(const std::vector<std::vector<std::pair<Letter, std::uint32_t>>>& g,
                             std::uint32_t from, std::uint32_t to, bool nonempty) {
  std::vector<std::int64_t> parent(g.size(), -1);
  std::vector<Letter> via(g.size(), 0);
  std::deque<std::uint32_t> queue;
  if (!nonempty) {
    if (from == to) return Word{};
    parent[from] = from;
  }
  queue.push_back(from);
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    for (auto [l, w] : g[v]) {
      if (parent[w] >= 0) continue;
      parent[w] = v;
      via[w] = l;
      if (w == to) {
        Word path{via[w]};
        for (auto c = static_cast<std::uint32_t>(parent[w]); c != from;
             c = static_cast<std::uint32_t>(parent[c]))
          path.push_back(via[c]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

}  // namespace

AmbiguityReport ambiguity_class(const Nfa& input) {
  const Nfa n = trim(input);
  const std::size_t size = n.num_states();
  AmbiguityReport report;
  if (size == 0) return report;
  const LetterIndex ix(n);

  // Self-product graph; node (p,q) = p*size+q. A node is "diagonal" when
  // p == q, an edge is diagonal when both components use the same transition.
  const std::size_t n2 = size * size;
  std::vector<std::vector<std::uint32_t>> adj2(n2);
  std::vector<std::vector<std::pair<Letter, std::uint32_t>>> lab2(n2);
  struct OffEdge {
    std::uint32_t from, to;
    Letter letter;
  };
  std::vector<OffEdge> off_diagonal_edges;
  for (State p = 0; p < size; ++p)
    for (State q = 0; q < size; ++q) {
      const auto v = static_cast<std::uint32_t>(p * size + q);
      for_each_pair(ix, p, q, [&](Letter l, State tp, std::size_t ip, State tq, std::size_t iq) {
        const auto w = static_cast<std::uint32_t>(tp * size + tq);
        adj2[v].push_back(w);
        lab2[v].emplace_back(l, w);
        if (p == q && ip != iq) off_diagonal_edges.push_back({v, w, l});
      });
    }
  const std::vector<int> comp2 = scc_ids(adj2);

  // EDA: an SCC of the self-product holding a diagonal node together with an
  // off-diagonal node or an off-diagonal edge.
  std::map<int, State> diag_of_comp;
  for (State p = 0; p < size; ++p) diag_of_comp.emplace(comp2[p * size + p], p);
  auto eda_witness = [&](State p, std::uint32_t mid_from, std::uint32_t mid_to,
                         std::optional<Letter> mid_letter) -> std::optional<Word> {
    const auto dp = static_cast<std::uint32_t>(p * size + p);
    auto a = bfs_path(lab2, dp, mid_from, false);
    auto b = bfs_path(lab2, mid_to, dp, false);
    if (!a || !b) return std::nullopt;
    Word w = *a;
    if (mid_letter) w.push_back(*mid_letter);
    w.insert(w.end(), b->begin(), b->end());
    return w;
  };
  for (const OffEdge& e : off_diagonal_edges) {
    if (comp2[e.from] == comp2[e.to]) {
      const State p = diag_of_comp.at(comp2[e.from]);
      report.cls = Ambiguity::exponential;
      report.pattern = AmbiguityPattern{p, p, eda_witness(p, e.from, e.to, e.letter).value_or(Word{})};
      return report;
    }
  }
  for (State p = 0; p < size; ++p)
    for (State q = 0; q < size; ++q) {
      if (p == q) continue;
      const auto v = static_cast<std::uint32_t>(p * size + q);
      auto it = diag_of_comp.find(comp2[v]);
      if (it == diag_of_comp.end()) continue;
      const State d = it->second;
      report.cls = Ambiguity::exponential;
      report.pattern = AmbiguityPattern{d, d, eda_witness(d, v, v, std::nullopt).value_or(Word{})};
      return report;
    }

  // IDA: p != q with p->p, p->q, q->q on one word, i.e. a path
  // (p,p,q) ->* (p,q,q) in the triple product. Candidates need (p,q) on a
  // cycle of the self-product; components are confined to the SCCs of p
  // and q (resp. paths between them) to keep the search small.
  std::vector<std::vector<std::uint32_t>> adj1(size);
  for (State s = 0; s < size; ++s)
    for (const Edge& e : n.edges(s)) adj1[s].push_back(e.target);
  const std::vector<int> comp1 = scc_ids(adj1);
  std::vector<char> cyclic2(n2, 0);
  {
    std::vector<int> comp_size(n2, 0);
    for (std::size_t v = 0; v < n2; ++v) ++comp_size[static_cast<std::size_t>(comp2[v])];
    for (std::size_t v = 0; v < n2; ++v) {
      if (comp_size[static_cast<std::size_t>(comp2[v])] > 1) cyclic2[v] = 1;
      for (auto w : adj2[v])
        if (w == v) cyclic2[v] = 1;
    }
  }
  for (State p = 0; p < size; ++p)
    for (State q = 0; q < size; ++q) {
      if (p == q || comp1[p] == comp1[q] || !cyclic2[p * size + q]) continue;
      // BFS over triples (a, b, c) with a in SCC(p), c in SCC(q).
      using Triple = std::array<State, 3>;
      std::map<Triple, std::pair<Triple, Letter>> parent;
      const Triple start{p, p, q}, goal{p, q, q};
      std::deque<Triple> queue{start};
      parent.emplace(start, std::make_pair(start, 0));
      bool found = false;
      while (!queue.empty() && !found) {
        const Triple t = queue.front();
        queue.pop_front();
        for_each_pair(ix, t[0], t[1], [&](Letter l, State a, std::size_t, State b, std::size_t) {
          if (found || comp1[a] != comp1[p]) return;
          for (const auto& it : ix.by_state[t[2]]) {
            if (it.letter != l || comp1[it.target] != comp1[q]) continue;
            const Triple nt{a, b, it.target};
            if (parent.emplace(nt, std::make_pair(t, l)).second) {
              if (nt == goal) {
                found = true;
                return;
              }
              queue.push_back(nt);
            }
          }
        });
      }
      if (found) {
        Word w;
        for (Triple c = goal; c != start; c = parent.at(c).first) w.push_back(parent.at(c).second);
        std::reverse(w.begin(), w.end());
        report.cls = Ambiguity::polynomial;
        report.pattern = AmbiguityPattern{p, q, std::move(w)};
        return report;
      }
    }
  return report;
}

// ---------------------------------------------------------------- format

namespace {

Letter parse_letter(const StructuredAlphabet& alphabet, std::string_view text, int line) {
  text = detail::trim(text);
  const auto open = text.find('[');
  const std::string_view name = detail::trim(text.substr(0, open));
  const auto base = alphabet.base_index(name);
  if (!base) throw ParseError("unknown letter '" + std::string(name) + "'", line, 1);
  std::uint32_t bits = 0;
  std::size_t count = 0;
  if (open != std::string_view::npos) {
    const auto close = text.find(']', open);
    if (close == std::string_view::npos) throw ParseError("missing ']'", line, 1);
    for (const auto& tok : detail::split_ws(text.substr(open + 1, close - open - 1))) {
      if (tok != "0" && tok != "1") throw ParseError("track bits must be 0 or 1", line, 1);
      if (tok == "1") bits |= 1u << count;
      ++count;
    }
  }
  if (count != alphabet.num_tracks())
    throw ParseError("expected " + std::to_string(alphabet.num_tracks()) + " track bits", line, 1);
  return alphabet.letter(*base, bits);
}

}  // namespace

Nfa parse_automaton(std::string_view text) {
  std::vector<std::string> base, tracks, states, initial, final;
  struct Pending {
    std::string from, letter, to;
    int line;
  };
  std::vector<Pending> pending;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (auto arrow = line.find("--"); arrow != std::string_view::npos) {
      const auto arrow2 = line.find("-->", arrow + 2);
      if (arrow2 == std::string_view::npos) throw ParseError("expected '-->'", line_no, 1);
      pending.push_back({std::string(detail::trim(line.substr(0, arrow))),
                         std::string(detail::trim(line.substr(arrow + 2, arrow2 - arrow - 2))),
                         std::string(detail::trim(line.substr(arrow2 + 3))), line_no});
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: values'", line_no, 1);
    const std::string_view key = detail::trim(line.substr(0, colon));
    auto values = detail::split_ws(line.substr(colon + 1));
    if (key == "alphabet") base = std::move(values);
    else if (key == "tracks") tracks = std::move(values);
    else if (key == "states") states = std::move(values);
    else if (key == "initial") initial = std::move(values);
    else if (key == "final") final = std::move(values);
    else throw ParseError("unknown header '" + std::string(key) + "'", line_no, 1);
  }
  Nfa n(StructuredAlphabet(base, tracks));
  std::map<std::string, State, std::less<>> ids;
  for (const auto& s : states) ids.emplace(s, n.add_state());
  auto lookup = [&](const std::string& s, int line) {
    auto it = ids.find(s);
    if (it == ids.end()) throw ParseError("unknown state '" + s + "'", line, 1);
    return it->second;
  };
  for (const auto& s : initial) n.set_initial(lookup(s, 0));
  for (const auto& s : final) n.set_final(lookup(s, 0));
  for (const auto& p : pending)
    n.add_transition(lookup(p.from, p.line), parse_letter(n.alphabet(), p.letter, p.line),
                     lookup(p.to, p.line));
  return n;
}

std::string format_automaton(const Nfa& n) {
  std::ostringstream out;
  const auto& a = n.alphabet();
  out << "alphabet: " << detail::join(a.base(), " ") << '\n';
  out << "tracks: " << detail::join(a.tracks(), " ") << '\n';
  out << "states:";
  for (State s = 0; s < n.num_states(); ++s) out << " s" << s;
  out << "\ninitial:";
  for (State s = 0; s < n.num_states(); ++s)
    if (n.is_initial(s)) out << " s" << s;
  out << "\nfinal:";
  for (State s = 0; s < n.num_states(); ++s)
    if (n.is_final(s)) out << " s" << s;
  out << '\n';
  for (State s = 0; s < n.num_states(); ++s)
    for (const Edge& e : n.edges(s))
      out << 's' << s << " -- " << a.format_letter(e.letter) << " --> s" << e.target << '\n';
  return out.str();
}

}  // namespace origami

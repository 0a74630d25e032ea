#include "origami/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <memory>
#include <set>

#include "origami/error.hpp"
#include "text_util.hpp"

namespace origami {

Interleaved interleave(const OriginGraph& g, std::size_t input_size) {
  const int n = static_cast<int>(g.input.size());
  if (g.origin.size() != g.output.size()) throw Error("origin map size mismatch");
  Interleaved w;
  std::size_t t = 0;
  for (int i = 1; i <= n; ++i) {
    if (g.input[i - 1] >= input_size) throw Error("input symbol out of range");
    w.push_back(g.input[i - 1]);
    for (; t < g.output.size() && g.origin[t] == i; ++t) w.push_back(static_cast<Symbol>(input_size + g.output[t]));
  }
  if (t != g.output.size())
    throw Error("origins must be non-decreasing positions of the input to interleave");
  return w;
}

OriginGraph deinterleave(const Interleaved& w, std::size_t input_size) {
  OriginGraph g;
  for (Symbol s : w) {
    if (s < input_size) {
      g.input.push_back(s);
      continue;
    }
    if (g.input.empty()) throw Error("output letter before any input letter");
    g.output.push_back(static_cast<Symbol>(s - input_size));
    g.origin.push_back(static_cast<int>(g.input.size()));
  }
  return g;
}

namespace {

std::vector<std::string> letter_names(const std::vector<std::string>& in, const std::vector<std::string>& out) {
  std::vector<std::string> all = in;
  all.insert(all.end(), out.begin(), out.end());
  return all;
}

void check_disjoint(const std::vector<std::string>& in, const std::vector<std::string>& out) {
  for (const auto& a : in)
    if (std::find(out.begin(), out.end(), a) != out.end())
      throw AlphabetMismatch("input and output alphabets share '" + a + "'; rename one of them");
}

}  // namespace

std::string format_interleaved(const std::vector<std::string>& in, const std::vector<std::string>& out,
                               const Interleaved& w, std::string_view sep) {
  return format_word(letter_names(in, out), w, sep);
}

Interleaved parse_interleaved(const std::vector<std::string>& in, const std::vector<std::string>& out,
                              std::string_view text) {
  return parse_word(letter_names(in, out), text);
}

std::vector<std::string> RationalResync::pair_names() const {
  const auto all = letter_names(input, output);
  std::vector<std::string> names;
  for (const auto& x : all)
    for (const auto& y : all) names.push_back(x + "/" + y);
  return names;
}

// ------------------------------------------------------------------ regex

namespace {

struct Regex {
  enum Kind { eps, letter, cat, alt, star, plus } kind = eps;
  Letter sym = 0;
  std::unique_ptr<Regex> a, b;
};
using RegexPtr = std::unique_ptr<Regex>;

class RegexParser {
 public:
  RegexParser(std::string_view text, const std::vector<std::string>& names) : s_(text), names_(names) {}

  RegexPtr parse() {
    RegexPtr r = alt();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("regex: " + what, 1, static_cast<int>(i_) + 1);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  static bool name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '+' && c != '*' &&
           c != '^' && c != '/';
  }
  static RegexPtr node(Regex::Kind k, RegexPtr a = nullptr, RegexPtr b = nullptr) {
    auto r = std::make_unique<Regex>();
    r->kind = k;
    r->a = std::move(a);
    r->b = std::move(b);
    return r;
  }

  RegexPtr alt() {
    RegexPtr r = cat();
    for (skip(); i_ < s_.size() && s_[i_] == '+'; skip()) {
      ++i_;
      r = node(Regex::alt, std::move(r), cat());
    }
    return r;
  }
  RegexPtr cat() {
    RegexPtr r;
    for (skip(); i_ < s_.size() && s_[i_] != ')' && s_[i_] != '+'; skip()) {
      RegexPtr p = postfix();
      r = r ? node(Regex::cat, std::move(r), std::move(p)) : std::move(p);
    }
    if (!r) fail("empty expression");
    return r;
  }
  RegexPtr postfix() {
    RegexPtr r = atom();
    for (skip(); i_ < s_.size(); skip()) {
      if (s_[i_] == '*') {
        ++i_;
        r = node(Regex::star, std::move(r));
      } else if (s_.substr(i_, 2) == "^+") {
        i_ += 2;
        r = node(Regex::plus, std::move(r));
      } else {
        break;
      }
    }
    return r;
  }
  RegexPtr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (s_[i_] == '(') {
      ++i_;
      RegexPtr r = alt();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
      ++i_;
      return r;
    }
    const std::size_t start = i_;
    while (i_ < s_.size() && (name_char(s_[i_]) || s_[i_] == '/')) ++i_;
    const std::string tok(s_.substr(start, i_ - start));
    if (tok.empty()) fail("expected a letter pair");
    if (tok == "eps") return node(Regex::eps);
    const auto it = std::find(names_.begin(), names_.end(), tok);
    if (it == names_.end()) fail("unknown letter pair '" + tok + "'");
    RegexPtr r = node(Regex::letter);
    r->sym = static_cast<Letter>(it - names_.begin());
    return r;
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t i_ = 0;
};

// Position automaton: one state per letter occurrence plus a start state.
struct Glushkov {
  std::vector<Letter> pos_letter;         // position p >= 1 at index p - 1
  std::vector<std::set<std::size_t>> follow;

  struct Info {
    bool nullable;
    std::set<std::size_t> first, last;
  };

  Info visit(const Regex& r) {
    switch (r.kind) {
      case Regex::eps: return {true, {}, {}};
      case Regex::letter: {
        pos_letter.push_back(r.sym);
        follow.emplace_back();
        const std::size_t p = pos_letter.size();
        return {false, {p}, {p}};
      }
      case Regex::cat: {
        Info x = visit(*r.a), y = visit(*r.b);
        for (std::size_t p : x.last) follow[p - 1].insert(y.first.begin(), y.first.end());
        Info out{x.nullable && y.nullable, x.first, y.last};
        if (x.nullable) out.first.insert(y.first.begin(), y.first.end());
        if (y.nullable) out.last.insert(x.last.begin(), x.last.end());
        return out;
      }
      case Regex::alt: {
        Info x = visit(*r.a), y = visit(*r.b);
        x.nullable = x.nullable || y.nullable;
        x.first.insert(y.first.begin(), y.first.end());
        x.last.insert(y.last.begin(), y.last.end());
        return x;
      }
      case Regex::star:
      case Regex::plus: {
        Info x = visit(*r.a);
        for (std::size_t p : x.last) follow[p - 1].insert(x.first.begin(), x.first.end());
        if (r.kind == Regex::star) x.nullable = true;
        return x;
      }
    }
    return {};
  }
};

Dfa compile_regex(std::string_view text, const std::vector<std::string>& names) {
  const RegexPtr r = RegexParser(text, names).parse();
  Glushkov g;
  const auto info = g.visit(*r);
  Nfa n(StructuredAlphabet(names, {}));
  n.add_state(true, info.nullable);
  for (std::size_t p = 0; p < g.pos_letter.size(); ++p) n.add_state(false, info.last.contains(p + 1));
  for (std::size_t p : info.first) n.add_transition(0, g.pos_letter[p - 1], static_cast<State>(p));
  for (std::size_t q = 0; q < g.follow.size(); ++q)
    for (std::size_t p : g.follow[q]) n.add_transition(static_cast<State>(q + 1), g.pos_letter[p - 1], static_cast<State>(p));
  return minimize(determinize(n));
}

}  // namespace

RationalResync make_rational(const std::vector<std::string>& in, const std::vector<std::string>& out,
                             std::string_view regex) {
  check_disjoint(in, out);
  RationalResync r{in, out, std::nullopt, -1, std::string(regex)};
  r.acceptor = compile_regex(regex, r.pair_names());
  return r;
}

RationalResync make_rational_identity(const std::vector<std::string>& in, const std::vector<std::string>& out) {
  std::string regex = "(";
  for (const auto& x : letter_names(in, out)) regex += (regex.size() > 1 ? " + " : "") + x + "/" + x;
  return make_rational(in, out, regex + ")*");
}

RationalResync make_rational_shift(const std::vector<std::string>& in, const std::vector<std::string>& out, int k) {
  if (k < 0) throw Error("shift must be non-negative");
  check_disjoint(in, out);
  return RationalResync{in, out, std::nullopt, k, "shift " + std::to_string(k)};
}

std::string block_regex() {
  const std::string bd = "(b/b d/d)", block = "(a/a (c/c + c/a (a/a)* a/c))";
  return bd + "* (" + block + " " + bd + "^+)* " + block + " " + bd + "*";
}

RationalResync make_rational_block() { return make_rational({"a", "b"}, {"c", "d"}, block_regex()); }


// ------------------------------------------------------------- acceptance

namespace {

// Compares the two projections while reading a pair letter by letter. With
// k >= 0 it also bounds the input-count lag and the displacement of every
// output letter.
struct Tracker {
  int k = -1;
  std::size_t in_size = 0;
  bool broken = false;
  int count[2] = {0, 0};
  int sig_owner = -1, gam_owner = -1;
  std::deque<Symbol> sig;
  std::deque<std::pair<Symbol, int>> gam;  // letter, input count at emission

  bool push(int side, Symbol s) {
    if (broken) return false;
    if (s < in_size) {
      ++count[side];
      if (k >= 0 && !gam.empty() && gam_owner != side && count[side] > gam.front().second + k) return fail();
      if (!sig.empty() && sig_owner != side) {
        if (sig.front() != s) return fail();
        sig.pop_front();
      } else {
        sig.push_back(s);
        sig_owner = side;
      }
      return true;
    }
    if (!gam.empty() && gam_owner != side) {
      if (gam.front().first != s) return fail();
      if (k >= 0 && std::abs(gam.front().second - count[side]) > k) return fail();
      gam.pop_front();
    } else {
      gam.emplace_back(s, count[side]);
      gam_owner = side;
    }
    return true;
  }
  // Lag check once both sides have read the same number of letters.
  bool settle() {
    if (k >= 0 && std::abs(count[0] - count[1]) > k) return fail();
    return !broken;
  }
  bool fail() {
    broken = true;
    return false;
  }
  bool empty() const { return !broken && sig.empty() && gam.empty(); }

  std::vector<std::int64_t> key() const {
    if (broken) return {-1};
    const int base = k >= 0 ? std::min(count[0], count[1]) : 0;
    std::vector<std::int64_t> out;
    if (k >= 0) {
      out.push_back(count[0] - base);
      out.push_back(count[1] - base);
    }
    out.push_back(sig.empty() ? -1 : sig_owner);
    out.insert(out.end(), sig.begin(), sig.end());
    out.push_back(gam.empty() ? -1 : gam_owner);
    for (auto [c, e] : gam) {
      out.push_back(c);
      if (k >= 0) out.push_back(e - base);
    }
    return out;
  }
};

std::vector<char> live_states(const Dfa& d) {
  const std::size_t n = d.num_states(), sigma = d.alphabet().size();
  std::vector<char> live(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (State s = 0; s < n; ++s) {
      if (live[s]) continue;
      bool l = d.is_final(s);
      for (std::size_t a = 0; a < sigma && !l; ++a) l = live[d.step(s, static_cast<Letter>(a))];
      if (l) live[s] = changed = true;
    }
  }
  return live;
}

}  // namespace

bool rational_accepts(const RationalResync& r, const Interleaved& top, const Interleaved& bottom) {
  if (top.size() != bottom.size()) return false;
  const std::size_t L = r.letters();
  for (const auto* w : {&top, &bottom})
    for (Symbol s : *w)
      if (s >= L) throw Error("letter out of range");
  if (r.acceptor) {
    State q = r.acceptor->initial();
    for (std::size_t i = 0; i < top.size(); ++i) q = r.acceptor->step(q, static_cast<Letter>(top[i] * L + bottom[i]));
    return r.acceptor->is_final(q);
  }
  Tracker t{r.shift, r.input.size()};
  for (std::size_t i = 0; i < top.size(); ++i)
    if (!t.push(0, top[i]) || !t.push(1, bottom[i]) || !t.settle()) return false;
  return t.empty();
}

bool rational_pair_accepts(const RationalResync& r, const OriginGraph& sigma, const OriginGraph& target) {
  return rational_accepts(r, interleave(sigma, r.input.size()), interleave(target, r.input.size()));
}

std::optional<std::pair<Interleaved, Interleaved>> projection_violation(const RationalResync& r,
                                                                        std::size_t max_len) {
  if (!r.acceptor) return std::nullopt;  // the shift form compares projections itself
  const Dfa& d = *r.acceptor;
  const std::size_t L = r.letters();
  const auto live = live_states(d);
  struct Node {
    State q;
    Tracker t;
    std::size_t parent, depth;
    Letter letter;
  };
  std::vector<Node> nodes{{d.initial(), Tracker{-1, r.input.size()}, 0, 0, 0}};
  std::set<std::pair<State, std::vector<std::int64_t>>> seen{{d.initial(), nodes[0].t.key()}};
  for (std::size_t at = 0; at < nodes.size(); ++at) {
    if (d.is_final(nodes[at].q) && !nodes[at].t.empty()) {
      Interleaved top, bottom;
      for (std::size_t i = at; i != 0; i = nodes[i].parent) {
        top.push_back(static_cast<Symbol>(nodes[i].letter / L));
        bottom.push_back(static_cast<Symbol>(nodes[i].letter % L));
      }
      std::reverse(top.begin(), top.end());
      std::reverse(bottom.begin(), bottom.end());
      return std::pair{top, bottom};
    }
    if (nodes[at].depth == max_len) continue;
    for (Letter a = 0; a < L * L; ++a) {
      const State q = d.step(nodes[at].q, a);
      if (!live[q]) continue;
      Tracker t = nodes[at].t;
      t.push(0, static_cast<Symbol>(a / L));
      t.push(1, static_cast<Symbol>(a % L));
      auto k = t.key();
      if (seen.emplace(q, std::move(k)).second) nodes.push_back({q, std::move(t), at, nodes[at].depth + 1, a});
    }
  }
  return std::nullopt;
}

Verdict contains_upto_rational(const Transducer& t1, const Transducer& t2, const RationalResync& r,
                               std::size_t max_input_len, const RunCaps& caps) {
  if (t1.kind() != TransducerKind::one_way || t2.kind() != TransducerKind::one_way)
    throw Error("rational resynchronizers apply to one-way transducers");
  if (t1.input_alphabet() != t2.input_alphabet() || t1.output_alphabet() != t2.output_alphabet())
    throw AlphabetMismatch("transducers must share input and output alphabets");
  if (r.input != t1.input_alphabet() || r.output != t1.output_alphabet())
    throw AlphabetMismatch("resynchronizer alphabets differ from the transducers'");
  Verdict v;
  v.max_input_len = max_input_len;
  v.caps = caps;
  for_each_word(r.input.size(), 1, max_input_len, [&](const SymWord& u) {
    if (!v.holds) return;
    const GraphSet graphs = run_origin_graphs(t1, u, caps);
    v.pruned = v.pruned || graphs.pruned;
    for (const auto& g : graphs.graphs) {
      ++v.graphs_checked;
      RunCaps c = caps;
      c.max_output = g.output.size();
      const GraphSet cands = run_origin_graphs(t2, u, g.output, c);
      v.pruned = v.pruned || cands.pruned;
      const bool ok = std::any_of(cands.graphs.begin(), cands.graphs.end(),
                                  [&](const OriginGraph& s) { return rational_pair_accepts(r, s, g); });
      if (ok) continue;
      v.holds = false;
      v.counterexample = g;
      if (!cands.graphs.empty()) v.nearest = cands.graphs.front();
      return;
    }
  });
  return v;
}

RationalResync parse_rational(std::string_view text) {
  std::vector<std::string> in, out;
  std::string regex;
  std::optional<int> shift;
  std::string* open = nullptr;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      if (!open) throw ParseError("expected 'key: value'", line_no, 1);
      *open += " " + std::string(line);
      continue;
    }
    const std::string key(detail::trim(line.substr(0, colon)));
    const std::string_view value = detail::trim(line.substr(colon + 1));
    open = nullptr;
    if (key == "input") {
      in = detail::split_ws(value);
    } else if (key == "output") {
      out = detail::split_ws(value);
    } else if (key == "regex") {
      regex = value;
      open = &regex;
    } else if (key == "shift") {
      try {
        shift = std::stoi(std::string(value));
      } catch (const std::exception&) {
        throw ParseError("shift must be an integer", line_no, static_cast<int>(colon) + 2);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, 1);
    }
  }
  if (in.empty() || out.empty()) throw ParseError("input: and output: are required");
  if (shift && !regex.empty()) throw ParseError("give either regex: or shift:, not both");
  if (shift) return make_rational_shift(in, out, *shift);
  if (regex.empty()) throw ParseError("regex: or shift: is required");
  return make_rational(in, out, regex);
}

}  // namespace origami

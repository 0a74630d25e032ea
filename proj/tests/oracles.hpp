#pragma once
// Independent reference implementations used by the unit tests.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "origami/automata.hpp"

namespace oracle {

using origami::Letter;
using origami::Nfa;
using origami::State;
using origami::Word;

/// Counts accepting runs by explicit depth-first enumeration of runs.
inline std::uint64_t count_runs_dfs(const Nfa& n, const Word& w) {
  std::uint64_t total = 0;
  std::function<void(State, std::size_t)> go = [&](State s, std::size_t i) {
    if (i == w.size()) {
      total += n.is_final(s) ? 1 : 0;
      return;
    }
    for (const auto& e : n.edges(s))
      if (e.letter == w[i]) go(e.target, i + 1);
  };
  for (State s = 0; s < n.num_states(); ++s)
    if (n.is_initial(s)) go(s, 0);
  return total;
}

/// Every word over `sigma` letters of length at most `max_len`, length-lex order.
inline std::vector<Word> all_words(std::size_t sigma, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Letter l = 0; l < sigma; ++l) {
        Word w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace oracle

#include <map>
#include <set>
#include <string>

#include "origami/mso.hpp"

namespace oracle {

/// Direct recursive semantics of MSO over a word of base-letter names.
/// First-order values live in `pos`, second-order values in `sets`.
struct Valuation {
  std::map<std::string, int> pos;
  std::map<std::string, std::set<int>> sets;
};

inline bool eval(const origami::mso::Formula& f, const std::vector<std::string>& word, Valuation& v) {
  using origami::mso::CmpOp;
  using origami::mso::Kind;
  const int n = static_cast<int>(word.size());
  switch (f->kind) {
    case Kind::truth: return true;
    case Kind::falsity: return false;
    case Kind::letter: return word[v.pos.at(f->var)] == f->letter;
    case Kind::member: return v.sets.at(f->other).count(v.pos.at(f->var)) > 0;
    case Kind::singleton: return v.sets.at(f->other) == std::set<int>{v.pos.at(f->var)};
    case Kind::first: return v.pos.at(f->var) == 0;
    case Kind::last: return v.pos.at(f->var) == n - 1;
    case Kind::compare: {
      const int a = v.pos.at(f->var), b = v.pos.at(f->other) + f->offset;
      switch (f->op) {
        case CmpOp::lt: return a < b;
        case CmpOp::le: return a <= b;
        case CmpOp::eq: return a == b;
        case CmpOp::ne: return a != b;
        case CmpOp::gt: return a > b;
        case CmpOp::ge: return a >= b;
      }
      return false;
    }
    case Kind::negation: return !eval(f->lhs, word, v);
    case Kind::conjunction: return eval(f->lhs, word, v) && eval(f->rhs, word, v);
    case Kind::disjunction: return eval(f->lhs, word, v) || eval(f->rhs, word, v);
    case Kind::implication: return !eval(f->lhs, word, v) || eval(f->rhs, word, v);
    case Kind::equivalence: return eval(f->lhs, word, v) == eval(f->rhs, word, v);
    case Kind::exists:
    case Kind::forall: {
      const bool want = f->kind == Kind::exists;
      bool result = !want;
      if (f->second_order) {
        auto saved = v.sets.find(f->var) != v.sets.end() ? std::optional(v.sets[f->var]) : std::nullopt;
        for (int mask = 0; mask < (1 << n) && result != want; ++mask) {
          std::set<int> s;
          for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) s.insert(i);
          v.sets[f->var] = s;
          if (eval(f->lhs, word, v) == want) result = want;
        }
        if (saved) v.sets[f->var] = *saved;
        else v.sets.erase(f->var);
      } else {
        auto saved = v.pos.find(f->var) != v.pos.end() ? std::optional(v.pos[f->var]) : std::nullopt;
        for (int i = 0; i < n && result != want; ++i) {
          v.pos[f->var] = i;
          if (eval(f->lhs, word, v) == want) result = want;
        }
        if (saved) v.pos[f->var] = *saved;
        else v.pos.erase(f->var);
      }
      return result;
    }
  }
  return false;
}

}  // namespace oracle

#include <fstream>
#include <sstream>

#include "origami/transducer.hpp"

namespace oracle {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline origami::Transducer load(const std::string& name) {
  return origami::parse_transducer(read_file("data/" + name));
}

/// Origin graphs by plain recursion over runs of at most `max_steps` steps.
inline std::set<origami::OriginGraph> graphs_by_recursion(const origami::Transducer& t,
                                                          const origami::SymWord& u,
                                                          std::size_t max_out, std::size_t max_steps) {
  using namespace origami;
  std::set<OriginGraph> out;
  const int n = static_cast<int>(u.size());
  std::function<void(std::uint32_t, int, SymWord&, std::vector<int>&, std::size_t)> go =
      [&](std::uint32_t s, int pos, SymWord& v, std::vector<int>& o, std::size_t steps) {
        if (t.is_final(s) && (t.kind() == TransducerKind::two_way || pos == n)) out.insert({u, v, o});
        if (steps == max_steps) return;
        for (const auto& tr : t.transitions()) {
          if (tr.from != s) continue;
          int np = pos, origin = 0;
          if (t.kind() == TransducerKind::one_way) {
            if (tr.read == kEpsilon) origin = std::min(pos + 1, n);
            else if (pos < n && tr.read == static_cast<int>(u[pos])) origin = np = pos + 1;
            else continue;
          } else {
            const int read = pos == 0 ? kLeftEnd : pos == n + 1 ? kRightEnd : static_cast<int>(u[pos - 1]);
            if (tr.read != read) continue;
            origin = pos;
            np = tr.dir == Direction::right ? pos + 1 : pos - 1;
            if (np < 0 || np > n + 1) continue;
          }
          if (v.size() + tr.output.size() > max_out) continue;
          for (Symbol c : tr.output) {
            v.push_back(c);
            o.push_back(origin);
          }
          go(tr.to, np, v, o, steps + 1);
          v.resize(v.size() - tr.output.size());
          o.resize(o.size() - tr.output.size());
        }
      };
  SymWord v;
  std::vector<int> o;
  for (std::uint32_t s = 0; s < t.num_states(); ++s)
    if (t.is_initial(s)) go(s, 0, v, o, 0);
  return out;
}

/// Graphs of a one-way transducer producing exactly `v`, by recursion over
/// runs of at most `max_steps` steps.
inline std::set<origami::OriginGraph> graphs_with_output(const origami::Transducer& t, const origami::SymWord& u,
                                                         const origami::SymWord& v, std::size_t max_steps) {
  using namespace origami;
  std::set<OriginGraph> out;
  const int n = static_cast<int>(u.size());
  std::vector<int> o;
  std::function<void(std::uint32_t, int, std::size_t)> go = [&](std::uint32_t s, int pos, std::size_t steps) {
    if (t.is_final(s) && pos == n && o.size() == v.size()) out.insert({u, v, o});
    if (steps == max_steps) return;
    for (const auto& tr : t.transitions()) {
      if (tr.from != s) continue;
      int np = pos, origin = std::min(pos + 1, n);
      if (tr.read != kEpsilon) {
        if (pos == n || tr.read != static_cast<int>(u[pos])) continue;
        np = origin = pos + 1;
      }
      const std::size_t j = o.size();
      if (j + tr.output.size() > v.size() || !std::equal(tr.output.begin(), tr.output.end(), v.begin() + j)) continue;
      o.insert(o.end(), tr.output.size(), origin);
      go(tr.to, np, steps + 1);
      o.resize(j);
    }
  };
  for (std::uint32_t s = 0; s < t.num_states(); ++s)
    if (t.is_initial(s)) go(s, 0, 0);
  return out;
}

}  // namespace oracle

#include "origami/resync.hpp"

namespace oracle {

/// Membership by enumerating every parameter valuation (least first, in the
/// same position-major order as the library) and evaluating the formula
/// directly at every output position.
inline std::optional<origami::ParamValuation> resync_member_brute(
    const origami::mso::Formula& gamma, const std::vector<std::string>& params,
    const std::vector<std::string>& base, const origami::OriginGraph& s, const origami::OriginGraph& t) {
  const std::size_t n = s.input.size(), m = params.size();
  std::vector<std::string> word;
  for (auto c : s.input) word.push_back(base[c]);
  const std::uint64_t total = std::uint64_t{1} << (n * m);
  for (std::uint64_t code = 0; code < total; ++code) {
    // Position i holds the m bits (code >> (n-1-i)*m); parameter j is bit j.
    origami::ParamValuation v(m, std::vector<bool>(n, false));
    Valuation val;
    for (std::size_t j = 0; j < m; ++j) {
      std::set<int> set;
      for (std::size_t i = 0; i < n; ++i) {
        const bool bit = (code >> ((n - 1 - i) * m + j)) & 1u;
        v[j][i] = bit;
        if (bit) set.insert(static_cast<int>(i));
      }
      val.sets[params[j]] = set;
    }
    bool ok = true;
    for (std::size_t z = 0; z < s.origin.size() && ok; ++z) {
      val.pos["x"] = s.origin[z] - 1;
      val.pos["y"] = t.origin[z] - 1;
      ok = eval(gamma, word, val);
    }
    if (ok) return v;
  }
  return std::nullopt;
}

}  // namespace oracle

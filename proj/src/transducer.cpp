#include "origami/transducer.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

#include "origami/error.hpp"
#include "text_util.hpp"

namespace origami {

Transducer::Transducer(TransducerKind kind, std::vector<std::string> input_alphabet,
                       std::vector<std::string> output_alphabet)
    : kind_(kind), in_(std::move(input_alphabet)), out_(std::move(output_alphabet)) {
  if (in_.empty()) throw Error("transducer: empty input alphabet");
  for (const auto* alpha : {&in_, &out_}) {
    std::vector<std::string> sorted = *alpha;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("transducer: duplicate alphabet symbol");
  }
}

std::optional<std::uint32_t> Transducer::state_index(std::string_view name) const {
  for (std::uint32_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::uint32_t Transducer::add_state(std::string name, bool initial, bool final) {
  if (state_index(name)) throw Error("transducer: duplicate state '" + name + "'");
  names_.push_back(std::move(name));
  initial_.push_back(initial);
  final_.push_back(final);
  index_.resize(names_.size() * (in_.size() + 3));
  return static_cast<std::uint32_t>(names_.size() - 1);
}

void Transducer::add_transition(Transition t) {
  if (t.from >= num_states() || t.to >= num_states()) throw Error("transition: unknown state");
  if (t.read >= static_cast<int>(in_.size()) || t.read < kRightEnd)
    throw Error("transition: input symbol out of range");
  for (Symbol s : t.output)
    if (s >= out_.size()) throw Error("transition: output symbol out of range");
  if (kind_ == TransducerKind::one_way) {
    if (t.read == kLeftEnd || t.read == kRightEnd)
      throw Error("transition: endmarkers are only read by two-way transducers");
    t.dir = Direction::right;
  } else {
    if (t.read == kEpsilon) throw Error("transition: two-way transducers have no epsilon moves");
    if (t.read == kLeftEnd && (t.dir != Direction::right || !t.output.empty()))
      throw Error("transition: the left endmarker must move right without output");
    if (t.read == kRightEnd && (t.dir != Direction::left || !t.output.empty()))
      throw Error("transition: the right endmarker must move left without output");
  }
  index_[slot(t.from, t.read)].push_back(static_cast<std::uint32_t>(transitions_.size()));
  transitions_.push_back(std::move(t));
}

const std::vector<std::uint32_t>& Transducer::outgoing(std::uint32_t s, int read) const {
  return index_[slot(s, read)];
}

std::optional<Symbol> Transducer::input_symbol(std::string_view name) const {
  for (Symbol i = 0; i < in_.size(); ++i)
    if (in_[i] == name) return i;
  return std::nullopt;
}

std::optional<Symbol> Transducer::output_symbol(std::string_view name) const {
  for (Symbol i = 0; i < out_.size(); ++i)
    if (out_[i] == name) return i;
  return std::nullopt;
}

// ------------------------------------------------------------ enumeration

namespace {

struct Config {
  std::uint32_t state;
  int pos;  // 1NT: letters consumed; 2NT: head position 0..n+1
  SymWord output;
  std::vector<int> origin;
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h = h * 1000003u ^ x;
    return h;
  }
};

std::vector<std::uint32_t> key_of(const Config& c) {
  std::vector<std::uint32_t> k;
  k.reserve(3 + 2 * c.output.size());
  k.push_back(c.state);
  k.push_back(static_cast<std::uint32_t>(c.pos));
  k.push_back(static_cast<std::uint32_t>(c.output.size()));
  k.insert(k.end(), c.output.begin(), c.output.end());
  for (int o : c.origin) k.push_back(static_cast<std::uint32_t>(o));
  return k;
}

// Breadth-first over configurations; depth = number of steps. When `target`
// is given, outputs must stay prefixes of it.
GraphSet enumerate(const Transducer& t, const SymWord& input, const SymWord* target,
                   const RunCaps& caps) {
  if (input.empty()) throw Error("origin graphs need a non-empty input word");
  for (Symbol s : input)
    if (s >= t.input_alphabet().size()) throw Error("input symbol out of range");
  const int n = static_cast<int>(input.size());
  const bool two_way = t.kind() == TransducerKind::two_way;
  const std::size_t max_out = target ? std::min(caps.max_output, target->size()) : caps.max_output;

  std::set<OriginGraph> found;
  bool pruned = false;
  std::unordered_set<std::vector<std::uint32_t>, KeyHash> seen;
  std::vector<Config> layer;
  for (std::uint32_t s = 0; s < t.num_states(); ++s)
    if (t.is_initial(s)) {
      Config c{s, 0, {}, {}};
      if (seen.insert(key_of(c)).second) layer.push_back(std::move(c));
    }

  auto accepting = [&](const Config& c) {
    if (!t.is_final(c.state)) return false;
    if (!two_way && c.pos != n) return false;
    return !target || c.output.size() == target->size();
  };

  for (std::size_t depth = 0; !layer.empty(); ++depth) {
    std::vector<Config> next;
    for (const Config& c : layer) {
      if (accepting(c)) found.insert(OriginGraph{input, c.output, c.origin});
      auto try_move = [&](std::uint32_t ti, int new_pos, int origin) {
        const Transition& tr = t.transitions()[ti];
        if (c.output.size() + tr.output.size() > max_out) {
          // Output cap only prunes when the run could have gone on legally.
          if (!target || c.output.size() + tr.output.size() <= target->size()) pruned = true;
          return;
        }
        if (target && !std::equal(tr.output.begin(), tr.output.end(),
                                  target->begin() + static_cast<std::ptrdiff_t>(c.output.size())))
          return;
        if (depth + 1 > caps.max_steps) {
          pruned = true;
          return;
        }
        Config d{tr.to, new_pos, c.output, c.origin};
        d.output.insert(d.output.end(), tr.output.begin(), tr.output.end());
        d.origin.insert(d.origin.end(), tr.output.size(), origin);
        if (seen.insert(key_of(d)).second) next.push_back(std::move(d));
      };
      if (two_way) {
        const int p = c.pos;
        const int read = p == 0 ? kLeftEnd : p == n + 1 ? kRightEnd : static_cast<int>(input[p - 1]);
        for (std::uint32_t ti : t.outgoing(c.state, read)) {
          const int np = t.transitions()[ti].dir == Direction::right ? p + 1 : p - 1;
          if (np < 0 || np > n + 1) continue;
          try_move(ti, np, p);
        }
      } else {
        for (std::uint32_t ti : t.outgoing(c.state, kEpsilon)) try_move(ti, c.pos, std::min(c.pos + 1, n));
        if (c.pos < n)
          for (std::uint32_t ti : t.outgoing(c.state, static_cast<int>(input[c.pos])))
            try_move(ti, c.pos + 1, c.pos + 1);
      }
    }
    layer = std::move(next);
  }
  return GraphSet{{found.begin(), found.end()}, pruned};
}

}  // namespace

GraphSet run_origin_graphs(const Transducer& t, const SymWord& input, const RunCaps& caps) {
  return enumerate(t, input, nullptr, caps);
}

GraphSet run_origin_graphs(const Transducer& t, const SymWord& input, const SymWord& output,
                           const RunCaps& caps) {
  return enumerate(t, input, &output, caps);
}

PairSet classical_pairs(const Transducer& t, std::size_t max_input_len, const RunCaps& caps) {
  PairSet out;
  for_each_word(t.input_alphabet().size(), 1, max_input_len, [&](const SymWord& u) {
    const GraphSet g = run_origin_graphs(t, u, caps);
    out.pruned = out.pruned || g.pruned;
    for (const auto& graph : g.graphs) out.pairs.emplace(graph.input, graph.output);
  });
  return out;
}

EquivalenceResult origin_equivalent_upto(const Transducer& a, const Transducer& b,
                                         std::size_t max_input_len, const RunCaps& caps) {
  if (a.input_alphabet() != b.input_alphabet() || a.output_alphabet() != b.output_alphabet())
    throw AlphabetMismatch("origin equivalence: alphabets differ");
  EquivalenceResult result;
  for (std::size_t n = 1; n <= max_input_len && result.equal; ++n) {
    for_each_word(a.input_alphabet().size(), n, n, [&](const SymWord& u) {
      if (!result.equal) return;
      const GraphSet ga = run_origin_graphs(a, u, caps);
      const GraphSet gb = run_origin_graphs(b, u, caps);
      result.pruned = result.pruned || ga.pruned || gb.pruned;
      std::vector<OriginGraph> only_a, only_b;
      std::set_difference(ga.graphs.begin(), ga.graphs.end(), gb.graphs.begin(), gb.graphs.end(),
                          std::back_inserter(only_a));
      std::set_difference(gb.graphs.begin(), gb.graphs.end(), ga.graphs.begin(), ga.graphs.end(),
                          std::back_inserter(only_b));
      if (only_a.empty() && only_b.empty()) return;
      result.equal = false;
      if (!only_a.empty() && (only_b.empty() || only_a.front() < only_b.front())) {
        result.counterexample = only_a.front();
        result.side = 1;
      } else {
        result.counterexample = only_b.front();
        result.side = 2;
      }
    });
  }
  return result;
}

// ---------------------------------------------------------------- words

SymWord parse_word(const std::vector<std::string>& alphabet, std::string_view text) {
  text = detail::trim(text);
  if (text.empty() || text == "eps") return {};
  auto lookup = [&](std::string_view name) -> std::optional<Symbol> {
    for (Symbol i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == name) return i;
    return std::nullopt;
  };
  SymWord out;
  for (const auto& token : detail::split_ws(text)) {
    if (auto s = lookup(token)) {
      out.push_back(*s);
      continue;
    }
    // Greedy longest match inside the token.
    std::size_t i = 0;
    while (i < token.size()) {
      std::size_t best_len = 0;
      Symbol best = 0;
      for (Symbol s = 0; s < alphabet.size(); ++s) {
        const auto& a = alphabet[s];
        if (a.size() > best_len && std::string_view(token).substr(i, a.size()) == a) {
          best_len = a.size();
          best = s;
        }
      }
      if (best_len == 0)
        throw ParseError("cannot split '" + token + "' into alphabet symbols", 0,
                         static_cast<int>(i) + 1);
      out.push_back(best);
      i += best_len;
    }
  }
  return out;
}

std::string format_word(const std::vector<std::string>& alphabet, const SymWord& w,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += alphabet.at(w[i]);
  }
  return out;
}

// --------------------------------------------------------------- format

Transducer parse_transducer(std::string_view text) {
  std::map<std::string, std::vector<std::string>> headers;
  struct Pending {
    std::string from, middle, to;
    int line;
  };
  std::vector<Pending> pending;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto arrow = line.find(" -- ");
    if (arrow != std::string_view::npos) {
      const auto arrow2 = line.rfind(" --> ");
      if (arrow2 == std::string_view::npos || arrow2 < arrow)
        throw ParseError("expected ' --> '", line_no, static_cast<int>(arrow) + 1);
      pending.push_back({std::string(detail::trim(line.substr(0, arrow))),
                         std::string(line.substr(arrow + 4, arrow2 - arrow - 4)),
                         std::string(detail::trim(line.substr(arrow2 + 5))), line_no});
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: values'", line_no, 1);
    const std::string key(detail::trim(line.substr(0, colon)));
    static const std::set<std::string> known{"kind",   "input-alphabet", "output-alphabet",
                                             "states", "initial",        "final"};
    if (!known.contains(key)) throw ParseError("unknown header '" + key + "'", line_no, 1);
    headers[key] = detail::split_ws(line.substr(colon + 1));
  }
  auto single = [&](const std::string& key) {
    auto it = headers.find(key);
    if (it == headers.end() || it->second.size() != 1)
      throw ParseError("header '" + key + "' needs exactly one value");
    return it->second[0];
  };
  const std::string kind_text = single("kind");
  if (kind_text != "1nt" && kind_text != "2nt") throw ParseError("kind must be 1nt or 2nt");
  const bool two_way = kind_text == "2nt";
  Transducer t(two_way ? TransducerKind::two_way : TransducerKind::one_way,
               headers["input-alphabet"], headers["output-alphabet"]);
  for (const auto& s : headers["states"]) t.add_state(s);
  auto state = [&](const std::string& name, int line) {
    auto s = t.state_index(name);
    if (!s) throw ParseError("unknown state '" + name + "'", line, 1);
    return *s;
  };
  for (const auto& s : headers["initial"]) t.set_initial(state(s, 0));
  for (const auto& s : headers["final"]) t.set_final(state(s, 0));
  for (const auto& p : pending) {
    std::string_view middle = p.middle;
    const auto slash = middle.find('/');
    if (slash == std::string_view::npos) throw ParseError("expected 'input / output'", p.line, 1);
    const std::string read_text(detail::trim(middle.substr(0, slash)));
    std::string_view out_text = middle.substr(slash + 1);
    Transition tr;
    tr.from = state(p.from, p.line);
    tr.to = state(p.to, p.line);
    if (two_way) {
      const auto comma = out_text.rfind(',');
      if (comma == std::string_view::npos) throw ParseError("expected ', L' or ', R'", p.line, 1);
      const auto dir = detail::trim(out_text.substr(comma + 1));
      if (dir != "L" && dir != "R") throw ParseError("direction must be L or R", p.line, 1);
      tr.dir = dir == "L" ? Direction::left : Direction::right;
      out_text = out_text.substr(0, comma);
    }
    if (read_text == "eps") tr.read = kEpsilon;
    else if (two_way && read_text == "<") tr.read = kLeftEnd;
    else if (two_way && read_text == ">") tr.read = kRightEnd;
    else if (auto s = t.input_symbol(read_text)) tr.read = static_cast<int>(*s);
    else throw ParseError("unknown input symbol '" + read_text + "'", p.line, 1);
    try {
      tr.output = parse_word(t.output_alphabet(), out_text);
      t.add_transition(std::move(tr));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), p.line, 1);
    } catch (const Error& e) {
      throw ParseError(e.what(), p.line, 1);
    }
  }
  return t;
}

std::string format_transducer(const Transducer& t) {
  std::ostringstream out;
  const bool two_way = t.kind() == TransducerKind::two_way;
  out << "kind: " << (two_way ? "2nt" : "1nt") << '\n';
  out << "input-alphabet: " << detail::join(t.input_alphabet(), " ") << '\n';
  out << "output-alphabet: " << detail::join(t.output_alphabet(), " ") << '\n';
  out << "states:";
  for (std::uint32_t s = 0; s < t.num_states(); ++s) out << ' ' << t.state_name(s);
  out << "\ninitial:";
  for (std::uint32_t s = 0; s < t.num_states(); ++s)
    if (t.is_initial(s)) out << ' ' << t.state_name(s);
  out << "\nfinal:";
  for (std::uint32_t s = 0; s < t.num_states(); ++s)
    if (t.is_final(s)) out << ' ' << t.state_name(s);
  out << '\n';
  for (const auto& tr : t.transitions()) {
    std::string read;
    if (tr.read == kEpsilon) read = "eps";
    else if (tr.read == kLeftEnd) read = "<";
    else if (tr.read == kRightEnd) read = ">";
    else read = t.input_alphabet()[static_cast<std::size_t>(tr.read)];
    out << t.state_name(tr.from) << " -- " << read << " / "
        << (tr.output.empty() ? "eps" : format_word(t.output_alphabet(), tr.output));
    if (two_way) out << ", " << (tr.dir == Direction::left ? 'L' : 'R');
    out << " --> " << t.state_name(tr.to) << '\n';
  }
  return out.str();
}

OriginGraph parse_origin_graph(const Transducer& t, std::string_view text) {
  return parse_origin_graph(t.input_alphabet(), t.output_alphabet(), text);
}

OriginGraph parse_origin_graph(const std::vector<std::string>& in,
                               const std::vector<std::string>& out, std::string_view text) {
  OriginGraph g;
  bool have_input = false;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: values'", line_no, 1);
    const auto key = detail::trim(line.substr(0, colon));
    const auto value = line.substr(colon + 1);
    try {
      if (key == "input") {
        g.input = parse_word(in, value);
        have_input = true;
      } else if (key == "output") {
        g.output = parse_word(out, value);
      } else if (key == "origin") {
        for (const auto& tok : detail::split_ws(value)) g.origin.push_back(std::stoi(tok));
      } else {
        throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("origins must be integers", line_no, 1);
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), line_no, 1);
    }
  }
  if (!have_input || g.input.empty()) throw ParseError("origin graph needs a non-empty input");
  if (g.origin.size() != g.output.size()) throw ParseError("one origin per output position needed");
  for (int o : g.origin)
    if (o < 1 || o > static_cast<int>(g.input.size())) throw ParseError("origin out of range");
  return g;
}

std::string format_origin_graph(const std::vector<std::string>& in,
                                const std::vector<std::string>& out, const OriginGraph& g) {
  std::ostringstream s;
  s << "input: " << format_word(in, g.input) << '\n';
  s << "output: " << format_word(out, g.output) << '\n';
  s << "origin:";
  for (int o : g.origin) s << ' ' << o;
  s << '\n';
  return s.str();
}

std::string origin_graph_dot(const std::vector<std::string>& in, const std::vector<std::string>& out,
                             const OriginGraph& g, const OriginGraph* overlay, int highlight) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream s;
  s << "digraph origin {\n  rankdir=TB;\n  node [shape=plaintext];\n";
  s << "  { rank=same;";
  for (std::size_t i = 0; i < g.input.size(); ++i) {
    s << " i" << i + 1 << " [label=" << quote(in.at(g.input[i]));
    if (static_cast<int>(i + 1) == highlight) s << ", shape=circle";
    s << "];";
  }
  s << " }\n  { rank=same;";
  for (std::size_t j = 0; j < g.output.size(); ++j)
    s << " o" << j + 1 << " [label=" << quote(out.at(g.output[j])) << "];";
  s << " }\n";
  for (std::size_t i = 1; i < g.input.size(); ++i)
    s << "  i" << i << " -> i" << i + 1 << " [style=invis];\n";
  for (std::size_t j = 1; j < g.output.size(); ++j)
    s << "  o" << j << " -> o" << j + 1 << " [style=invis];\n";
  for (std::size_t j = 0; j < g.origin.size(); ++j)
    s << "  o" << j + 1 << " -> i" << g.origin[j] << ";\n";
  if (overlay)
    for (std::size_t j = 0; j < overlay->origin.size(); ++j)
      s << "  o" << j + 1 << " -> i" << overlay->origin[j] << " [style=dashed];\n";
  s << "}\n";
  return s.str();
}

}  // namespace origami

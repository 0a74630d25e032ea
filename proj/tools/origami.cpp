// origami: command-line front end.
// Exit codes: 0 holds / accepted / bounded, 1 fails / rejected / unbounded,
// 2 usage or parse error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "origami/containment.hpp"
#include "origami/error.hpp"
#include "origami/mso.hpp"
#include "origami/rational.hpp"
#include "origami/reduction.hpp"
#include "origami/resync.hpp"
#include "origami/traversal.hpp"

using namespace origami;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Config {
  std::string format = "text";
  std::size_t max_len = 4;
  std::size_t max_output = 16;
  std::size_t max_steps = 64;
  int k_max = 3;
  std::string out_dir = ".";
  std::string alphabet = "a b";
  std::string overlay;
  int highlight = 0;
  std::size_t wf_len = 0;
  std::vector<std::string> args = std::vector<std::string>(3);  // positionals

  RunCaps caps() const { return {max_output, max_steps}; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  return std::string(s.substr(a, s.find_last_not_of(" \t\r") - a + 1));
}

// Value of the first `key:` line, if any.
std::optional<std::string> header(std::string_view text, std::string_view key) {
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    if (t.size() > key.size() && t.starts_with(key) && t[key.size()] == ':') return trim(t.substr(key.size() + 1));
  }
  return std::nullopt;
}

Transducer load_transducer(const std::string& path) {
  try {
    return parse_transducer(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Letters of a word written with or without spaces.
std::vector<std::string> infer_alphabet(const std::string& word) {
  std::vector<std::string> w = words(word);
  if (w.size() == 1 && w[0] != "eps") {
    std::vector<std::string> chars;
    for (char c : w[0]) chars.emplace_back(1, c);
    w = chars;
  }
  std::vector<std::string> out;
  for (const auto& x : w)
    if (x != "eps" && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

struct LoadedGraph {
  std::vector<std::string> in, out;
  OriginGraph g;
};

// Graph files may carry `input-alphabet:` and `output-alphabet:` lines; when
// they do not, the alphabets come from the caller or from the words.
LoadedGraph load_graph(const std::string& path, const std::vector<std::string>* in = nullptr,
                       const std::vector<std::string>* out = nullptr) {
  const std::string text = read_file(path);
  std::string body;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const std::string t = trim(line);
    if (t.starts_with("input-alphabet:") || t.starts_with("output-alphabet:")) body += "\n";
    else body += line + "\n";
  }
  LoadedGraph r;
  auto pick = [&](const char* key, const char* word_key, const std::vector<std::string>* given) {
    if (auto h = header(text, key)) {
      const auto a = words(*h);
      if (given && a != *given) throw AlphabetMismatch(path + ": " + key + " differs from the expected alphabet");
      return a;
    }
    if (given) return *given;
    return infer_alphabet(header(text, word_key).value_or(""));
  };
  r.in = pick("input-alphabet", "input", in);
  r.out = pick("output-alphabet", "output", out);
  try {
    r.g = parse_origin_graph(r.in, r.out, body);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return r;
}

Json graph_json(const std::vector<std::string>& in, const std::vector<std::string>& out, const OriginGraph& g) {
  Json j;
  j["input"] = format_word(in, g.input);
  j["output"] = format_word(out, g.output);
  j["origin"] = g.origin;
  j["dot"] = origin_graph_dot(in, out, g);
  return j;
}

Json graph_or_null(const Transducer& t, const std::optional<OriginGraph>& g) {
  return g ? graph_json(t.input_alphabet(), t.output_alphabet(), *g) : Json(nullptr);
}

std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

std::string automaton_dot(const Nfa& n) {
  std::ostringstream s;
  s << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (State q = 0; q < n.num_states(); ++q) {
    s << "  q" << q << " [label=\"" << q << "\"" << (n.is_final(q) ? ", shape=doublecircle" : "") << "];\n";
    if (n.is_initial(q)) s << "  start" << q << " [shape=point];\n  start" << q << " -> q" << q << ";\n";
  }
  for (State q = 0; q < n.num_states(); ++q) {
    std::map<State, std::string> labels;
    for (const Edge& e : n.edges(q)) {
      auto& l = labels[e.target];
      l += (l.empty() ? "" : ", ") + n.alphabet().format_letter(e.letter);
    }
    for (const auto& [to, l] : labels) s << "  q" << q << " -> q" << to << " [label=" << quote(l) << "];\n";
  }
  s << "}\n";
  return s.str();
}

std::string transducer_dot(const Transducer& t) {
  std::ostringstream s;
  s << "digraph transducer {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::uint32_t q = 0; q < t.num_states(); ++q) {
    s << "  s" << q << " [label=" << quote(t.state_name(q)) << (t.is_final(q) ? ", shape=doublecircle" : "")
      << "];\n";
    if (t.is_initial(q)) s << "  start" << q << " [shape=point];\n  start" << q << " -> s" << q << ";\n";
  }
  for (const auto& tr : t.transitions()) {
    std::string read = tr.read == kEpsilon    ? "eps"
                       : tr.read == kLeftEnd  ? "<"
                       : tr.read == kRightEnd ? ">"
                                              : t.input_alphabet()[static_cast<std::size_t>(tr.read)];
    std::string label = read + " / " + (tr.output.empty() ? "eps" : format_word(t.output_alphabet(), tr.output));
    if (t.kind() == TransducerKind::two_way) label += tr.dir == Direction::left ? ", L" : ", R";
    s << "  s" << tr.from << " -> s" << tr.to << " [label=" << quote(label) << "];\n";
  }
  s << "}\n";
  return s.str();
}

void warn_pruned(bool pruned, const Config& c) {
  if (pruned)
    std::cerr << "warning: runs cut by caps (max-output " << c.max_output << ", max-steps " << c.max_steps
              << "); results hold within the caps only\n";
}

void emit(const Config& c, const Json& j, const std::string& text, const std::string& dot = {}) {
  if (c.format == "json") std::cout << j.dump(2) << '\n';
  else if (c.format == "dot" && !dot.empty()) std::cout << dot;
  else std::cout << text;
}

bool is_rational_text(std::string_view text) { return header(text, "regex") || header(text, "shift"); }

// ---------------------------------------------------------------- commands

int cmd_origin_graphs(const Config& c) {
  const Transducer t = load_transducer(c.args[0]);
  const SymWord u = parse_word(t.input_alphabet(), c.args[1]);
  const GraphSet gs = run_origin_graphs(t, u, c.caps());
  warn_pruned(gs.pruned, c);
  Json j;
  j["input"] = format_word(t.input_alphabet(), u);
  j["pruned"] = gs.pruned;
  j["graphs"] = Json::array();
  std::string text, dot;
  for (const auto& g : gs.graphs) {
    j["graphs"].push_back(graph_json(t.input_alphabet(), t.output_alphabet(), g));
    text += format_origin_graph(t.input_alphabet(), t.output_alphabet(), g) + "\n";
    dot += origin_graph_dot(t.input_alphabet(), t.output_alphabet(), g);
  }
  text += std::to_string(gs.graphs.size()) + " origin graph(s)\n";
  emit(c, j, text, dot);
  return gs.graphs.empty() ? 1 : 0;
}

int cmd_origin_equiv(const Config& c) {
  const Transducer a = load_transducer(c.args[0]), b = load_transducer(c.args[1]);
  const EquivalenceResult r = origin_equivalent_upto(a, b, c.max_len, c.caps());
  warn_pruned(r.pruned, c);
  Json j;
  j["equal"] = r.equal;
  j["max_len"] = c.max_len;
  j["pruned"] = r.pruned;
  j["side"] = r.side;
  j["counterexample"] = graph_or_null(a, r.counterexample);
  std::string text = r.equal ? "origin-equivalent on inputs up to length " + std::to_string(c.max_len) + "\n"
                             : "differ: graph produced only by transducer " + std::to_string(r.side) + "\n" +
                                   format_origin_graph(a.input_alphabet(), a.output_alphabet(), *r.counterexample);
  emit(c, j, text,
       r.counterexample ? origin_graph_dot(a.input_alphabet(), a.output_alphabet(), *r.counterexample) : "");
  return r.equal ? 0 : 1;
}

int cmd_mso_compile(const Config& c) {
  const mso::Formula f = mso::parse(c.args[0]);
  const auto sig = mso::free_variables(f);
  const Dfa d = mso::compile(f, words(c.alphabet), sig);
  const Nfa n = to_nfa(d);
  Json j;
  j["formula"] = mso::to_string(f);
  j["tracks"] = Json::array();
  for (const auto& v : sig) j["tracks"].push_back(v.name);
  j["states"] = d.num_states();
  j["automaton"] = format_automaton(n);
  emit(c, j, format_automaton(n), automaton_dot(n));
  return 0;
}

int cmd_resync_check(const Config& c) {
  const std::string text = read_file(c.args[0]);
  const std::string dir = fs::path(c.args[0]).parent_path().string();
  Json j;
  std::string out;
  bool accepted = false;
  if (is_extended_text(text)) {
    const ExtendedResynchronizer r = parse_extended(text);
    const auto s = load_graph(c.args[1], &r.base, &r.output), t = load_graph(c.args[2], &r.base, &r.output);
    const ExtendedMembership m = extended_pair_in_resync(r, s.g, t.g);
    accepted = m.accepted;
    j["accepted"] = accepted;
    j["input_params"] = m.input_params;
    j["output_params"] = m.output_params;
    out = accepted ? "accepted\n" : "rejected\n";
  } else {
    const Resynchronizer r = parse_resync(text, words(c.alphabet), dir.empty() ? "." : dir);
    const auto s = load_graph(c.args[1], &r.base), t = load_graph(c.args[2], &r.base, &s.out);
    const MembershipResult m = pair_in_resync(r, s.g, t.g);
    accepted = m.accepted;
    j["accepted"] = accepted;
    Json w = Json::object();
    for (std::size_t p = 0; p < m.witness.size(); ++p) w[r.params[p]] = m.witness[p];
    j["witness"] = w;
    out = accepted ? "accepted\n" + format_valuation(r, m.witness) : "rejected\n";
    const TraversalReport tr = traversal_report(s.g, t.g);
    j["max_traversal"] = tr.max_count;
    out += "max traversal " + std::to_string(tr.max_count) + "\n";
  }
  emit(c, j, out);
  return accepted ? 0 : 1;
}

int cmd_resync_bounded(const Config& c) {
  const std::string dir = fs::path(c.args[0]).parent_path().string();
  const Resynchronizer r = parse_resync(read_file(c.args[0]), words(c.alphabet), dir.empty() ? "." : dir);
  const BoundednessResult b = is_bounded(r);
  Json j;
  j["bounded"] = b.bounded;
  j["ambiguity"] = std::string(to_string(b.ambiguity));
  j["automaton_states"] = b.automaton_states;
  j["pattern"] = b.pattern;
  std::string text = std::string(b.bounded ? "bounded" : "unbounded") + " (source automaton ambiguity " +
                     std::string(to_string(b.ambiguity)) + ", " + std::to_string(b.automaton_states) + " states)\n";
  if (!b.bounded) text += "witness: " + b.pattern + "\n";
  emit(c, j, text);
  return b.bounded ? 0 : 1;
}

Json verdict_json(const Transducer& t, const Verdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["max_len"] = v.max_input_len;
  j["caps"] = {{"max_output", v.caps.max_output}, {"max_steps", v.caps.max_steps}};
  j["graphs_checked"] = v.graphs_checked;
  j["pruned"] = v.pruned;
  j["counterexample"] = graph_or_null(t, v.counterexample);
  j["nearest"] = graph_or_null(t, v.nearest);
  if (v.counterexample && v.nearest) j["nearest_traversal"] = traversal_report(*v.nearest, *v.counterexample).max_count;
  return j;
}

std::string verdict_text(const Transducer& t, const Verdict& v) {
  const auto& in = t.input_alphabet();
  const auto& out = t.output_alphabet();
  if (v.holds)
    return "holds on inputs up to length " + std::to_string(v.max_input_len) + " (" +
           std::to_string(v.graphs_checked) + " graphs)\n";
  std::string s = "fails\ncounterexample (first transducer):\n" + format_origin_graph(in, out, *v.counterexample);
  if (v.nearest) s += "a second-transducer graph with the same input and output:\n" + format_origin_graph(in, out, *v.nearest);
  else s += "no second-transducer graph has the same input and output\n";
  return s;
}

// Source (second transducer) solid, target (first transducer) dashed.
std::string verdict_dot(const Transducer& t, const Verdict& v) {
  if (!v.counterexample) return {};
  if (!v.nearest) return origin_graph_dot(t.input_alphabet(), t.output_alphabet(), *v.counterexample);
  return origin_graph_dot(t.input_alphabet(), t.output_alphabet(), *v.nearest, &*v.counterexample);
}

int cmd_contains(const Config& c) {
  const Transducer t1 = load_transducer(c.args[0]), t2 = load_transducer(c.args[1]);
  const std::string text = read_file(c.args[2]);
  Verdict v;
  if (is_rational_text(text)) {
    v = contains_upto_rational(t1, t2, parse_rational(text), c.max_len, c.caps());
  } else {
    const std::string dir = fs::path(c.args[2]).parent_path().string();
    v = contains_upto(t1, t2, parse_resync(text, t1.input_alphabet(), dir.empty() ? "." : dir), c.max_len, c.caps());
  }
  warn_pruned(v.pruned, c);
  emit(c, verdict_json(t1, v), verdict_text(t1, v), verdict_dot(t1, v));
  return v.holds ? 0 : 1;
}

Json profile_json(const Transducer& t, const TraversalProfile& p) {
  Json j;
  j["entries"] = Json::array();
  for (const auto& e : p.entries) {
    Json x;
    x["length"] = e.length;
    x["value"] = e.infinite ? Json("inf") : Json(e.value);
    x["witness"] = graph_or_null(t, e.witness);
    x["partner"] = graph_or_null(t, e.partner);
    j["entries"].push_back(x);
  }
  j["increasing_run"] = p.increasing_run;
  j["growth_evidence"] = p.growth_evidence;
  j["pruned"] = p.pruned;
  return j;
}

std::string profile_dot(const Transducer& t, const TraversalProfile& p) {
  for (auto e = p.entries.rbegin(); e != p.entries.rend(); ++e)
    if (e->witness && e->partner)
      return origin_graph_dot(t.input_alphabet(), t.output_alphabet(), *e->partner, &*e->witness,
                              traversal_report(*e->partner, *e->witness).argmax);
  return {};
}

int cmd_resync_search(const Config& c) {
  const Transducer t1 = load_transducer(c.args[0]), t2 = load_transducer(c.args[1]);
  const SearchResult r = resync_search(t1, t2, c.k_max, c.max_len, c.caps());
  warn_pruned(r.verdict.pruned || r.profile.pruned, c);
  Json j;
  j["found"] = r.found;
  j["k"] = r.found ? Json(r.k) : Json(nullptr);
  j["k_max"] = c.k_max;
  j["verdict"] = verdict_json(t1, r.verdict);
  if (!r.found) j["profile"] = profile_json(t1, r.profile);
  std::string text = r.found ? "found: R_" + std::to_string(r.k) + " works on inputs up to length " +
                                   std::to_string(c.max_len) + "\n"
                             : "not found for k <= " + std::to_string(c.k_max) + "\n" +
                                   verdict_text(t1, r.verdict) + format_profile(r.profile);
  emit(c, j, text, r.found ? "" : verdict_dot(t1, r.verdict));
  return r.found ? 0 : 1;
}

int cmd_traversal_profile(const Config& c) {
  const Transducer t1 = load_transducer(c.args[0]), t2 = load_transducer(c.args[1]);
  const TraversalProfile p = traversal_profile(t1, t2, c.max_len, c.caps());
  warn_pruned(p.pruned, c);
  emit(c, profile_json(t1, p), format_profile(p), profile_dot(t1, p));
  const bool infinite = std::any_of(p.entries.begin(), p.entries.end(), [](const auto& e) { return e.infinite; });
  return infinite ? 1 : 0;
}

TuringMachine load_machine(const std::string& path) {
  try {
    return parse_machine(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int cmd_gen_reduction(const Config& c) {
  const TuringMachine m = load_machine(c.args[0]);
  const TileSet tiles = build_tiles(m);
  fs::create_directories(c.out_dir);
  const std::vector<std::pair<std::string, std::string>> files{
      {"tiles.txt", format_tiles(tiles)},
      {"tup.1nt", format_transducer(build_up(m, tiles))},
      {"tdown.1nt", format_transducer(build_down(m, tiles))},
      {"tup_prime.1nt", format_transducer(build_up_prime(m, tiles))},
      {"tdown_prime.1nt", format_transducer(build_down_prime(m, tiles))}};
  Json j;
  j["tiles"] = Json::array();
  for (const auto& t : tiles.tiles)
    j["tiles"].push_back({{"name", t.name},
                          {"top", format_word(tiles.gamma, t.top)},
                          {"bottom", format_word(tiles.gamma, t.bottom)},
                          {"kind", to_string(t.kind)}});
  j["files"] = Json::array();
  for (const auto& [name, body] : files) {
    const fs::path p = fs::path(c.out_dir) / name;
    std::ofstream(p) << body;
    j["files"].push_back(p.string());
  }
  const History h = history(m, 16, 64);
  j["history"] = {{"word", format_word(tiles.gamma, h.word)},
                  {"status", to_string(h.status)},
                  {"max_cells", h.max_cells}};
  std::string text = format_tiles(tiles) + "history (" + to_string(h.status) + "): " +
                     format_word(tiles.gamma, h.word, "") + "\n";
  for (const auto& f : j["files"]) text += "wrote " + f.get<std::string>() + "\n";
  emit(c, j, text);
  return 0;
}

int cmd_check_domino(const Config& c) {
  const TuringMachine m = load_machine(c.args[0]);
  const TileSet tiles = build_tiles(m);
  const auto names = tiles.names();
  std::vector<std::size_t> lambda;
  for (const auto& w : words(c.args[1])) {
    const auto it = std::find(names.begin(), names.end(), w);
    if (it == names.end()) throw ParseError("unknown tile '" + w + "'");
    lambda.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  const DominoCheck d = check_domino_lemma(m, tiles, lambda);
  Json j;
  j["status"] = to_string(d.status);
  j["top"] = format_word(tiles.gamma, d.top);
  j["bottom"] = format_word(tiles.gamma, d.bottom);
  const std::string text = std::string(to_string(d.status)) + "\ntop:    " + format_word(tiles.gamma, d.top, "") +
                           "\nbottom: " + format_word(tiles.gamma, d.bottom, "") + "\n";
  if (d.status == DominoStatus::undecided) std::cerr << "warning: history too short to decide\n";
  emit(c, j, text);
  return d.status == DominoStatus::ok || d.status == DominoStatus::vacuous ? 0 : 1;
}

int cmd_rational_check(const Config& c) {
  const RationalResync r = parse_rational(read_file(c.args[0]));
  const auto s = load_graph(c.args[1], &r.input, &r.output), t = load_graph(c.args[2], &r.input, &r.output);
  const Interleaved top = interleave(s.g, r.input.size()), bottom = interleave(t.g, r.input.size());
  const bool ok = rational_accepts(r, top, bottom);
  Json j;
  j["accepted"] = ok;
  j["top"] = format_interleaved(r.input, r.output, top, " ");
  j["bottom"] = format_interleaved(r.input, r.output, bottom, " ");
  std::string text = std::string(ok ? "accepted" : "rejected") + "\ntop:    " +
                     format_interleaved(r.input, r.output, top) + "\nbottom: " +
                     format_interleaved(r.input, r.output, bottom) + "\n";
  if (c.wf_len > 0) {
    const auto v = projection_violation(r, c.wf_len);
    j["projection_violation"] =
        v ? Json{format_interleaved(r.input, r.output, v->first, " "), format_interleaved(r.input, r.output, v->second, " ")}
          : Json(nullptr);
    text += v ? "projection violation: " + format_interleaved(r.input, r.output, v->first) + " / " +
                    format_interleaved(r.input, r.output, v->second) + "\n"
              : "projections agree on pairs up to length " + std::to_string(c.wf_len) + "\n";
  }
  emit(c, j, text);
  return ok ? 0 : 1;
}

int cmd_dot(const Config& c) {
  const std::string text = read_file(c.args[0]);
  std::string dot;
  if (header(text, "kind")) {
    dot = transducer_dot(load_transducer(c.args[0]));
  } else if (header(text, "origin")) {
    const auto g = load_graph(c.args[0]);
    if (!c.overlay.empty()) {
      const auto o = load_graph(c.overlay, &g.in, &g.out);
      dot = origin_graph_dot(g.in, g.out, g.g, &o.g, c.highlight);
    } else {
      dot = origin_graph_dot(g.in, g.out, g.g, nullptr, c.highlight);
    }
  } else {
    dot = automaton_dot(parse_automaton(text));
  }
  std::cout << dot;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"origami: transducers with origin semantics and resynchronizers"};
  app.require_subcommand(1);
  Config cfg;
  std::function<int(const Config&)> run;

  auto add = [&](const std::string& name, const std::string& help, std::vector<std::string> positional,
                 std::function<int(const Config&)> f) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (std::size_t i = 0; i < positional.size(); ++i) sub->add_option(positional[i], cfg.args[i])->required();
    sub->add_option("--format", cfg.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->callback([&run, f] { run = f; });
    return sub;
  };
  auto caps = [&](CLI::App* sub) {
    sub->add_option("--max-output", cfg.max_output, "output length cap per run")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", cfg.max_steps, "step cap per run")->check(CLI::PositiveNumber);
  };
  auto sweep = [&](CLI::App* sub) {
    caps(sub);
    sub->add_option("--max-len", cfg.max_len, "longest input of the sweep")->check(CLI::PositiveNumber);
  };

  caps(add("origin-graphs", "origin graphs of a transducer on a word", {"transducer", "word"}, cmd_origin_graphs));
  sweep(add("origin-equiv", "origin equivalence on a sweep", {"t1", "t2"}, cmd_origin_equiv));
  add("mso-compile", "compile an MSO formula", {"formula"}, cmd_mso_compile)
      ->add_option("--alphabet", cfg.alphabet, "base alphabet, space separated");
  for (auto* sub : {add("resync-check", "is (graph1, graph2) in the resynchronizer?", {"resync", "graph1", "graph2"},
                        cmd_resync_check),
                    add("resync-bounded", "boundedness of a resynchronizer", {"resync"}, cmd_resync_bounded)})
    sub->add_option("--alphabet", cfg.alphabet, "input alphabet when the file has no alphabet: line");
  sweep(add("contains", "containment of t1 in R(t2) on a sweep", {"t1", "t2", "resync"}, cmd_contains));
  auto* search = add("resync-search", "least k with t1 in R_k(t2) on a sweep", {"t1", "t2"}, cmd_resync_search);
  sweep(search);
  search->add_option("--k-max", cfg.k_max, "largest k tried")->check(CLI::NonNegativeNumber);
  sweep(add("traversal-profile", "per-length traversal profile", {"t1", "t2"}, cmd_traversal_profile));
  add("gen-reduction", "tiles and transducers of a Turing machine", {"machine"}, cmd_gen_reduction)
      ->add_option("--out-dir", cfg.out_dir, "directory for the generated files");
  add("check-domino", "domino lemma for a tile sequence", {"machine", "lambda"}, cmd_check_domino);
  add("rational-check", "is (graph1, graph2) in the rational resynchronizer?", {"rational", "graph1", "graph2"},
      cmd_rational_check)
      ->add_option("--wf-len", cfg.wf_len, "also search accepted pairs up to this length for projection mismatches");
  auto* dot = add("dot", "DOT drawing of a transducer, automaton or origin graph", {"file"}, cmd_dot);
  dot->add_option("--overlay", cfg.overlay, "second origin graph, drawn dashed");
  dot->add_option("--highlight", cfg.highlight, "input position to circle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

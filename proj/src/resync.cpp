#include "origami/resync.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "origami/error.hpp"
#include "search.hpp"
#include "text_util.hpp"

namespace origami {

namespace {

std::vector<mso::Variable> gamma_signature(const std::vector<std::string>& params) {
  std::vector<mso::Variable> sig;
  for (const auto& p : params) {
    if (p == "x" || p == "y") throw Error("parameter names x and y are reserved");
    sig.push_back({p, true});
  }
  sig.push_back({"x", false});
  sig.push_back({"y", false});
  return sig;
}

}  // namespace

Resynchronizer make_resync(const std::vector<std::string>& base,
                           const std::vector<std::string>& params, const mso::Formula& gamma) {
  return Resynchronizer{base, params, mso::compile(gamma, base, gamma_signature(params)),
                        mso::to_string(gamma)};
}

Resynchronizer make_resync(const std::vector<std::string>& base,
                           const std::vector<std::string>& params, std::string_view gamma) {
  Resynchronizer r = make_resync(base, params, mso::parse(gamma));
  r.description = std::string(detail::trim(gamma));
  return r;
}

Resynchronizer make_resync(Dfa gamma) {
  const auto& tracks = gamma.alphabet().tracks();
  if (tracks.size() < 2 || tracks[tracks.size() - 2] != "x" || tracks.back() != "y")
    throw Error("gamma automaton must end with tracks x y");
  std::vector<std::string> params(tracks.begin(), tracks.end() - 2);
  std::vector<std::string> base = gamma.alphabet().base();
  return Resynchronizer{std::move(base), std::move(params), minimize(gamma), "<automaton>"};
}

Resynchronizer make_identity(const std::vector<std::string>& base) {
  return make_resync(base, {}, "x = y");
}

Resynchronizer make_universal(const std::vector<std::string>& base) {
  return make_resync(base, {}, "true");
}

Resynchronizer make_pm1(const std::vector<std::string>& base) {
  return make_resync(base, {}, "x = y + 1 | y = x + 1");
}

Resynchronizer make_shift(const std::vector<std::string>& base, int k) {
  if (k < 0) throw Error("shift needs k >= 0");
  return make_resync(base, {}, "y <= x & x <= y + " + std::to_string(k));
}

Resynchronizer make_param_example(const std::vector<std::string>& base) {
  return make_resync(base, {"I"}, "I = {x} | x = y");
}

mso::Formula rk_formula(int k) {
  using namespace mso;
  std::vector<Formula> parts{compare("x", CmpOp::eq, "y")};
  for (int i = 0; i < k; ++i) {
    const std::string right = "Right_" + std::to_string(i);
    parts.push_back(conj(conj(member("x", right), compare("x", CmpOp::lt, "y")),
                         forall("z", implies(conj(compare("x", CmpOp::lt, "z"), compare("z", CmpOp::lt, "y")),
                                             neg(member("z", right))))));
  }
  for (int i = 0; i < k; ++i) {
    const std::string left = "Left_" + std::to_string(i);
    parts.push_back(conj(conj(member("x", left), compare("y", CmpOp::lt, "x")),
                         forall("z", implies(conj(compare("y", CmpOp::lt, "z"), compare("z", CmpOp::lt, "x")),
                                             neg(member("z", left))))));
  }
  return disj_all(parts);
}

Resynchronizer make_Rk(const std::vector<std::string>& base, int k) {
  if (k < 0) throw Error("R_k needs k >= 0");
  std::vector<std::string> params;
  for (int i = 0; i < k; ++i) params.push_back("Right_" + std::to_string(i));
  for (int i = 0; i < k; ++i) params.push_back("Left_" + std::to_string(i));
  return make_resync(base, params, rk_formula(k));
}

Resynchronizer make_to_first(const std::vector<std::string>& base) {
  return make_resync(base, {}, "first(x)");
}

Resynchronizer make_first_to_last(const std::vector<std::string>& base) {
  return make_resync(base, {}, "first(x) & last(y)");
}

mso::Formula block_formula() {
  return mso::parse(
      "(x <= y & (forall z. (x <= z & z <= y) -> a(z)) & !(exists w. w + 1 = x & a(w)) & "
      "!(exists w. w = y + 1 & a(w))) | (b(x) & x = y)");
}

Resynchronizer make_block(const std::vector<std::string>& base) {
  return make_resync(base, {}, block_formula());
}

// ------------------------------------------------------------ membership

namespace {

Letter gamma_letter(const Dfa& d, Symbol a, std::uint32_t param_bits, std::size_t m, bool bx, bool by) {
  std::uint32_t bits = param_bits;
  if (bx) bits |= 1u << m;
  if (by) bits |= 1u << (m + 1);
  return d.alphabet().letter(a, bits);
}

void check_graphs(const OriginGraph& sigma, const OriginGraph& target) {
  if (sigma.input != target.input || sigma.output != target.output)
    throw Error("origin graphs must share input and output words");
  const int n = static_cast<int>(sigma.input.size());
  for (const auto* g : {&sigma, &target}) {
    if (g->origin.size() != g->output.size()) throw Error("origin map size mismatch");
    for (int o : g->origin)
      if (o < 1 || o > n) throw Error("origin out of range");
  }
}

}  // namespace

MembershipResult pair_in_resync(const Resynchronizer& r, const OriginGraph& sigma,
                                const OriginGraph& target) {
  check_graphs(sigma, target);
  std::vector<detail::Component> comps;
  for (std::size_t z = 0; z < sigma.origin.size(); ++z)
    comps.push_back({&r.gamma, sigma.origin[z], target.origin[z], true});
  MembershipResult result;
  if (auto v = detail::least_valuation(sigma.input, r.num_params(), comps)) {
    result.accepted = true;
    result.witness = std::move(*v);
  }
  return result;
}

bool gamma_holds(const Resynchronizer& r, const SymWord& u, const ParamValuation& params, int x,
                 int y) {
  const std::size_t m = r.num_params();
  State s = r.gamma.initial();
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (params.at(j).at(i)) bits |= 1u << j;
    s = r.gamma.step(s, gamma_letter(r.gamma, u[i], bits, m, static_cast<int>(i) + 1 == x,
                                     static_cast<int>(i) + 1 == y));
  }
  return r.gamma.is_final(s);
}

bool check_witness(const Resynchronizer& r, const OriginGraph& sigma, const OriginGraph& target,
                   const ParamValuation& params) {
  check_graphs(sigma, target);
  if (params.size() != r.num_params()) return false;
  for (const auto& p : params)
    if (p.size() != sigma.input.size()) return false;
  for (std::size_t z = 0; z < sigma.origin.size(); ++z)
    if (!gamma_holds(r, sigma.input, params, sigma.origin[z], target.origin[z])) return false;
  return true;
}

// ----------------------------------------------------------- boundedness

Nfa source_automaton(const Resynchronizer& r) {
  const Dfa& g = r.gamma;
  const std::size_t m = r.num_params();
  std::vector<std::string> tracks = r.params;
  tracks.push_back("y");
  Nfa n(StructuredAlphabet(r.base, tracks));
  const std::size_t q = g.num_states();
  // State (s, placed) = 2 * s + placed.
  for (State s = 0; s < 2 * q; ++s) n.add_state(s == 2 * g.initial(), (s & 1) && g.is_final(s / 2));
  const auto sigma = static_cast<Letter>(n.alphabet().size());
  for (State s = 0; s < q; ++s)
    for (Letter l = 0; l < sigma; ++l) {
      const Symbol a = static_cast<Symbol>(n.alphabet().base_of(l));
      const std::uint32_t bits = n.alphabet().bits_of(l);
      const std::uint32_t params = bits & ((1u << m) - 1u);
      const bool by = (bits >> m) & 1u;
      n.add_transition(2 * s, l, 2 * g.step(s, gamma_letter(g, a, params, m, false, by)));
      n.add_transition(2 * s, l, 2 * g.step(s, gamma_letter(g, a, params, m, true, by)) + 1);
      n.add_transition(2 * s + 1, l, 2 * g.step(s, gamma_letter(g, a, params, m, false, by)) + 1);
    }
  return trim(n);
}

BoundednessResult is_bounded(const Resynchronizer& r) {
  const Nfa n = source_automaton(r);
  const AmbiguityReport rep = ambiguity_class(n);
  BoundednessResult out;
  out.automaton_states = n.num_states();
  out.ambiguity = rep.cls;
  out.bounded = rep.cls == Ambiguity::finite;
  if (rep.pattern) {
    std::ostringstream s;
    s << "states " << rep.pattern->p << ", " << rep.pattern->q << "; pump word "
      << n.alphabet().format_word(rep.pattern->word);
    out.pattern = s.str();
  }
  return out;
}

std::optional<BoundViolation> bounded_by(const Resynchronizer& r, int k, std::size_t max_len) {
  if (k < 0) throw Error("bounded_by needs k >= 0");
  const Nfa n = source_automaton(r);
  if (n.num_states() == 0) return std::nullopt;
  const auto cap = static_cast<std::uint8_t>(std::min(k + 1, 255));
  using Counts = std::vector<std::uint8_t>;
  struct Node {
    Counts counts;
    std::size_t parent;
    Letter letter;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  auto key = [](const Counts& c) { return std::string(c.begin(), c.end()); };
  Counts start(n.num_states(), 0);
  for (State s = 0; s < n.num_states(); ++s)
    if (n.is_initial(s)) start[s] = 1;
  nodes.push_back({start, 0, 0, 0});
  seen.emplace(key(start), 0);
  const auto sigma = static_cast<Letter>(n.alphabet().size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    int accepting = 0;
    for (State s = 0; s < n.num_states(); ++s)
      if (n.is_final(s)) accepting += nodes[i].counts[s];
    if (accepting > k) {
      Word w;
      for (std::size_t j = i; j != 0; j = nodes[j].parent) w.push_back(nodes[j].letter);
      std::reverse(w.begin(), w.end());
      BoundViolation v;
      const std::size_t m = r.num_params();
      v.params.assign(m, std::vector<bool>(w.size(), false));
      for (std::size_t p = 0; p < w.size(); ++p) {
        v.input.push_back(static_cast<Symbol>(n.alphabet().base_of(w[p])));
        for (std::size_t j = 0; j < m; ++j) v.params[j][p] = n.alphabet().bit(w[p], j);
        if (n.alphabet().bit(w[p], m)) v.target = static_cast<int>(p) + 1;
      }
      for (int x = 1; x <= static_cast<int>(w.size()); ++x)
        if (gamma_holds(r, v.input, v.params, x, v.target)) v.sources.push_back(x);
      return v;
    }
    if (nodes[i].depth == max_len) continue;
    for (Letter l = 0; l < sigma; ++l) {
      Counts next(n.num_states(), 0);
      bool any = false;
      for (State s = 0; s < n.num_states(); ++s) {
        if (!nodes[i].counts[s]) continue;
        for (const Edge& e : n.edges(s))
          if (e.letter == l) {
            next[e.target] = static_cast<std::uint8_t>(std::min<int>(cap, next[e.target] + nodes[i].counts[s]));
            any = true;
          }
      }
      if (!any) continue;
      if (seen.emplace(key(next), nodes.size()).second)
        nodes.push_back({std::move(next), i, l, nodes[i].depth + 1});
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------ composition

Resynchronizer compose(const Resynchronizer& first, const Resynchronizer& second) {
  if (first.base != second.base) throw AlphabetMismatch("compose: input alphabets differ");
  std::vector<std::string> p1 = first.params, p2 = second.params;
  for (auto& a : p1)
    if (std::find(second.params.begin(), second.params.end(), a) != second.params.end()) a += "_1";
  for (auto& a : p2)
    if (std::find(first.params.begin(), first.params.end(), a) != first.params.end()) a += "_2";
  std::vector<std::string> tracks = p1;
  tracks.insert(tracks.end(), p2.begin(), p2.end());
  const std::size_t m = tracks.size();
  tracks.insert(tracks.end(), {"x", "y", "$mid"});
  const StructuredAlphabet wide(first.base, tracks);
  const std::size_t x = m, y = m + 1, z = m + 2;
  // first: gamma1(I1, z, y)
  std::vector<std::size_t> map1;
  for (std::size_t i = 0; i < p1.size(); ++i) map1.push_back(i);
  map1.push_back(z);
  map1.push_back(y);
  // second: gamma2(I2, x, z)
  std::vector<std::size_t> map2;
  for (std::size_t i = 0; i < p2.size(); ++i) map2.push_back(p1.size() + i);
  map2.push_back(x);
  map2.push_back(z);
  Dfa both = intersect(remap_tracks(first.gamma, wide, map1), remap_tracks(second.gamma, wide, map2));
  // The middle position is a single position.
  Dfa sing(wide, 3, 0);
  for (Letter l = 0; l < wide.size(); ++l) {
    const bool b = wide.bit(l, z);
    sing.set_step(0, l, b ? 1 : 0);
    sing.set_step(1, l, b ? 2 : 1);
    sing.set_step(2, l, 2);
  }
  sing.set_final(1);
  Dfa g = minimize(project_track(intersect(both, sing), z));
  std::vector<std::string> params = p1;
  params.insert(params.end(), p2.begin(), p2.end());
  return Resynchronizer{first.base, params, g,
                        "compose(" + first.description + ", " + second.description + ")"};
}

std::string format_valuation(const Resynchronizer& r, const ParamValuation& v) {
  std::ostringstream s;
  for (std::size_t j = 0; j < v.size(); ++j) {
    s << r.params.at(j) << ':';
    for (bool b : v[j]) s << ' ' << (b ? 1 : 0);
    s << '\n';
  }
  return s.str();
}

// -------------------------------------------------------------- extended

namespace {

std::size_t parse_type(const ExtendedResynchronizer& r, std::string_view text) {
  text = detail::trim(text);
  const auto open = text.find('[');
  const std::string name(detail::trim(text.substr(0, open)));
  const auto it = std::find(r.output.begin(), r.output.end(), name);
  if (it == r.output.end()) throw ParseError("unknown output letter '" + name + "' in type");
  std::uint32_t bits = 0;
  std::size_t count = 0;
  if (open != std::string_view::npos) {
    const auto close = text.find(']', open);
    if (close == std::string_view::npos) throw ParseError("missing ']' in type");
    for (const auto& tok : detail::split_ws(text.substr(open + 1, close - open - 1))) {
      if (tok != "0" && tok != "1") throw ParseError("type bits must be 0 or 1");
      if (tok == "1") bits |= 1u << count;
      ++count;
    }
  }
  if (count != r.out_params.size()) throw ParseError("type needs one bit per output parameter");
  return r.type_of(static_cast<Symbol>(it - r.output.begin()), bits);
}

}  // namespace

ExtendedResynchronizer make_extended(const ExtendedSpec& spec) {
  ExtendedResynchronizer r;
  r.base = spec.base;
  r.output = spec.output;
  r.params = spec.params;
  r.out_params = spec.out_params;
  std::vector<mso::Variable> in_sig, out_sig;
  for (const auto& p : spec.params) in_sig.push_back({p, true});
  for (const auto& p : spec.out_params) out_sig.push_back({p, true});
  r.alpha = mso::compile(mso::parse(spec.alpha), spec.base, in_sig);
  r.beta = mso::compile(mso::parse(spec.beta), spec.output, out_sig);
  const auto sig = gamma_signature(spec.params);
  const Dfa gamma_default = mso::compile(mso::parse(spec.gamma_default), spec.base, sig);
  const Dfa delta_default = mso::compile(mso::parse(spec.delta_default), spec.base, sig);
  const std::size_t types = r.num_types();
  r.gamma.assign(types, gamma_default);
  r.delta.assign(types * types, delta_default);
  for (const auto& [type, f] : spec.gamma)
    r.gamma[parse_type(r, type)] = mso::compile(mso::parse(f), spec.base, sig);
  for (const auto& [types_pair, f] : spec.delta)
    r.delta[parse_type(r, types_pair.first) * types + parse_type(r, types_pair.second)] =
        mso::compile(mso::parse(f), spec.base, sig);
  return r;
}

ExtendedMembership extended_pair_in_resync(const ExtendedResynchronizer& r,
                                           const OriginGraph& sigma, const OriginGraph& target) {
  check_graphs(sigma, target);
  const std::size_t n_out = r.out_params.size();
  const std::size_t len = sigma.output.size();
  if (n_out * len > 24) throw Error("too many output parameter bits for exhaustive search");
  ExtendedMembership result;
  const std::uint64_t total = std::uint64_t{1} << (n_out * len);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Position-major: bits of output position z occupy n_out consecutive bits
    // starting from the most significant end, so masks count in lex order.
    auto bits_at = [&](std::size_t z) {
      const std::size_t shift = (len - 1 - z) * n_out;
      return static_cast<std::uint32_t>((mask >> shift) & ((1u << n_out) - 1u));
    };
    State b = r.beta.initial();
    for (std::size_t z = 0; z < len; ++z)
      b = r.beta.step(b, r.beta.alphabet().letter(sigma.output[z], bits_at(z)));
    // Compiled formulas reject the empty word, so beta is vacuous on it.
    if (len > 0 && !r.beta.is_final(b)) continue;
    std::vector<detail::Component> comps{{&r.alpha, 0, 0, false}};
    for (std::size_t z = 0; z < len; ++z) {
      const std::size_t t = r.type_of(sigma.output[z], bits_at(z));
      comps.push_back({&r.gamma[t], sigma.origin[z], target.origin[z], true});
      if (z + 1 < len) {
        const std::size_t t2 = r.type_of(sigma.output[z + 1], bits_at(z + 1));
        comps.push_back({&r.delta[t * r.num_types() + t2], target.origin[z], target.origin[z + 1], true});
      }
    }
    if (auto v = detail::least_valuation(sigma.input, r.params.size(), comps)) {
      result.accepted = true;
      result.input_params = std::move(*v);
      result.output_params.assign(n_out, std::vector<bool>(len, false));
      for (std::size_t z = 0; z < len; ++z)
        for (std::size_t j = 0; j < n_out; ++j) result.output_params[j][z] = (bits_at(z) >> j) & 1u;
      return result;
    }
  }
  return result;
}

Resynchronizer simplify_extended(const ExtendedResynchronizer& r) {
  Dfa g = r.gamma.at(0);
  for (std::size_t t = 1; t < r.gamma.size(); ++t) g = minimize(unite(g, r.gamma[t]));
  return Resynchronizer{r.base, r.params, minimize(g), "union of gamma over output types"};
}

// ----------------------------------------------------------------- files

namespace {

struct KeyValue {
  std::string key, value;
  int line;
};

std::vector<KeyValue> key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    // Keys may contain parentheses with commas (delta(c, d)); the key ends at
    // the first ':' outside parentheses.
    int depth = 0;
    std::size_t colon = std::string_view::npos;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '(') ++depth;
      if (line[i] == ')') --depth;
      if (line[i] == ':' && depth == 0) {
        colon = i;
        break;
      }
    }
    if (colon == std::string_view::npos) {
      // Continuation of the previous formula.
      if (out.empty()) throw ParseError("expected 'key: value'", line_no, 1);
      out.back().value += " " + std::string(line);
      continue;
    }
    out.push_back({std::string(detail::trim(line.substr(0, colon))),
                   std::string(detail::trim(line.substr(colon + 1))), line_no});
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool is_extended_text(std::string_view text) {
  for (const auto& kv : key_values(text))
    if (kv.key == "out-params" || kv.key == "alpha" || kv.key == "beta" || kv.key.starts_with("delta") ||
        kv.key.starts_with("gamma(") || kv.key == "output-alphabet")
      return true;
  return false;
}

Resynchronizer parse_resync(std::string_view text, const std::vector<std::string>& default_base,
                            const std::string& base_dir) {
  std::vector<std::string> base = default_base, params;
  std::optional<std::string> gamma, automaton;
  int gamma_line = 0;
  for (const auto& kv : key_values(text)) {
    if (kv.key == "alphabet") base = detail::split_ws(kv.value);
    else if (kv.key == "params") params = detail::split_ws(kv.value);
    else if (kv.key == "gamma") {
      gamma = kv.value;
      gamma_line = kv.line;
    } else if (kv.key == "gamma-automaton") automaton = kv.value;
    else throw ParseError("unknown key '" + kv.key + "'", kv.line, 1);
  }
  if (automaton) {
    const std::string path = automaton->starts_with('/') ? *automaton : base_dir + "/" + *automaton;
    Resynchronizer r = make_resync(determinize(parse_automaton(read_text_file(path))));
    if (r.params != params) throw ParseError("automaton tracks do not match params");
    return r;
  }
  if (!gamma) throw ParseError("missing 'gamma:'");
  if (base.empty()) throw ParseError("missing 'alphabet:'");
  try {
    return make_resync(base, params, *gamma);
  } catch (const ParseError& e) {
    throw ParseError(std::string("gamma: ") + e.what(), gamma_line, e.column());
  }
}

ExtendedResynchronizer parse_extended(std::string_view text, const std::vector<std::string>& default_base,
                                      const std::vector<std::string>& default_output) {
  ExtendedSpec spec;
  spec.base = default_base;
  spec.output = default_output;
  for (const auto& kv : key_values(text)) {
    if (kv.key == "alphabet") spec.base = detail::split_ws(kv.value);
    else if (kv.key == "output-alphabet") spec.output = detail::split_ws(kv.value);
    else if (kv.key == "params") spec.params = detail::split_ws(kv.value);
    else if (kv.key == "out-params") spec.out_params = detail::split_ws(kv.value);
    else if (kv.key == "alpha") spec.alpha = kv.value;
    else if (kv.key == "beta") spec.beta = kv.value;
    else if (kv.key == "gamma") spec.gamma_default = kv.value;
    else if (kv.key == "delta") spec.delta_default = kv.value;
    else if (kv.key.starts_with("gamma(") && kv.key.ends_with(")"))
      spec.gamma.emplace_back(kv.key.substr(6, kv.key.size() - 7), kv.value);
    else if (kv.key.starts_with("delta(") && kv.key.ends_with(")")) {
      const std::string inner = kv.key.substr(6, kv.key.size() - 7);
      const auto parts = detail::split(inner, ',');
      if (parts.size() != 2) throw ParseError("delta needs two types", kv.line, 1);
      spec.delta.push_back({{parts[0], parts[1]}, kv.value});
    } else {
      throw ParseError("unknown key '" + kv.key + "'", kv.line, 1);
    }
  }
  if (spec.base.empty() || spec.output.empty()) throw ParseError("missing alphabet");
  return make_extended(spec);
}

}  // namespace origami

#include "origami/mso.hpp"

#include <cctype>
#include <map>
#include <set>

#include "origami/error.hpp"

namespace origami::mso {

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

}  // namespace

Formula tt() { return make({.kind = Kind::truth}); }
Formula ff() { return make({.kind = Kind::falsity}); }
Formula letter(std::string a, std::string x) {
  return make({.kind = Kind::letter, .letter = std::move(a), .var = std::move(x)});
}
Formula compare(std::string x, CmpOp op, std::string y, int offset) {
  return make({.kind = Kind::compare, .var = std::move(x), .other = std::move(y), .op = op,
               .offset = offset});
}
Formula member(std::string x, std::string set) {
  return make({.kind = Kind::member, .var = std::move(x), .other = std::move(set)});
}
Formula first(std::string x) { return make({.kind = Kind::first, .var = std::move(x)}); }
Formula last(std::string x) { return make({.kind = Kind::last, .var = std::move(x)}); }
Formula singleton(std::string set, std::string x) {
  return make({.kind = Kind::singleton, .var = std::move(x), .other = std::move(set)});
}
Formula neg(Formula f) { return make({.kind = Kind::negation, .lhs = std::move(f)}); }
Formula conj(Formula a, Formula b) {
  return make({.kind = Kind::conjunction, .lhs = std::move(a), .rhs = std::move(b)});
}
Formula disj(Formula a, Formula b) {
  return make({.kind = Kind::disjunction, .lhs = std::move(a), .rhs = std::move(b)});
}
Formula implies(Formula a, Formula b) {
  return make({.kind = Kind::implication, .lhs = std::move(a), .rhs = std::move(b)});
}
Formula iff(Formula a, Formula b) {
  return make({.kind = Kind::equivalence, .lhs = std::move(a), .rhs = std::move(b)});
}
Formula exists(std::string x, Formula body) {
  return make({.kind = Kind::exists, .var = std::move(x), .lhs = std::move(body)});
}
Formula forall(std::string x, Formula body) {
  return make({.kind = Kind::forall, .var = std::move(x), .lhs = std::move(body)});
}
Formula exists2(std::string set, Formula body) {
  return make({.kind = Kind::exists, .var = std::move(set), .second_order = true,
               .lhs = std::move(body)});
}
Formula forall2(std::string set, Formula body) {
  return make({.kind = Kind::forall, .var = std::move(set), .second_order = true,
               .lhs = std::move(body)});
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return tt();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return ff();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

// ------------------------------------------------------------------ parser

namespace {

struct Token {
  enum Type { ident, quoted, number, symbol, end } type;
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  static const char* kSymbols[] = {"<->", "->", "<=", ">=", "!=", "<", ">", "=", "&", "|",
                                   "!",   "(",  ")",  ".",  ",",  "+", "-", "{", "}"};
  while (i < s.size()) {
    const char c = s[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::ident, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::number, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (c == '\'') {
      const auto close = s.find('\'', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated quoted letter", 1, col);
      out.push_back({Token::quoted, std::string(s.substr(i + 1, close - i - 1)), col});
      i = close + 1;
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      const std::string_view v(sym);
      if (s.substr(i, v.size()) == v) {
        out.push_back({Token::symbol, std::string(v), col});
        i += v.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", 1, col);
  }
  out.push_back({Token::end, "", static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().type != Token::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).type == Token::symbol && peek(ahead).text == s;
  }
  bool accept(std::string_view s) {
    if (!is_symbol(s)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 1, peek().column);
  }
  std::string identifier() {
    if (peek().type != Token::ident) fail("expected a variable name");
    return tokens_[pos_++].text;
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (accept("<->")) f = iff(f, parse_implies());
    return f;
  }
  Formula parse_implies() {
    Formula f = parse_or();
    if (accept("->")) return implies(f, parse_implies());
    return f;
  }
  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = disj(f, parse_and());
    return f;
  }
  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = conj(f, parse_unary());
    return f;
  }
  Formula parse_unary() {
    if (accept("!")) return neg(parse_unary());
    if (accept("(")) {
      Formula f = parse_iff();
      expect(")");
      return f;
    }
    const Token& t = peek();
    if (t.type == Token::ident &&
        (t.text == "exists" || t.text == "forall" || t.text == "exists2" || t.text == "forall2")) {
      ++pos_;
      const bool universal = t.text.starts_with("forall");
      const bool second = t.text.ends_with("2");
      std::vector<std::string> vars{identifier()};
      while (accept(",") || peek().type == Token::ident) vars.push_back(identifier());
      expect(".");
      Formula body = parse_iff();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (second) body = universal ? forall2(*it, body) : exists2(*it, body);
        else body = universal ? forall(*it, body) : exists(*it, body);
      }
      return body;
    }
    return parse_atom();
  }

  // term := ident (('+'|'-') number)?
  std::pair<std::string, int> parse_term() {
    std::string v = identifier();
    int off = 0;
    if (is_symbol("+") || is_symbol("-")) {
      const bool minus = peek().text == "-";
      ++pos_;
      if (peek().type != Token::number) fail("expected a number");
      off = std::stoi(tokens_[pos_++].text);
      if (minus) off = -off;
    }
    return {v, off};
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (t.type == Token::ident && (t.text == "true" || t.text == "false")) {
      ++pos_;
      return t.text == "true" ? tt() : ff();
    }
    if ((t.type == Token::ident || t.type == Token::quoted) && is_symbol("(", 1)) {
      const std::string name = t.text;
      pos_ += 2;
      std::string x = identifier();
      expect(")");
      if (t.type == Token::ident && name == "first") return first(x);
      if (t.type == Token::ident && name == "last") return last(x);
      return letter(name, x);
    }
    if (t.type == Token::ident && peek(1).type == Token::ident &&
        (peek(1).text == "in" || peek(1).text == "notin")) {
      std::string x = identifier();
      const bool negated = identifier() == "notin";
      Formula f = member(x, identifier());
      return negated ? neg(f) : f;
    }
    if (t.type == Token::ident && is_symbol("=", 1) && is_symbol("{", 2)) {
      std::string set = identifier();
      pos_ += 2;
      std::string x = identifier();
      expect("}");
      return singleton(set, x);
    }
    auto [x, xo] = parse_term();
    static const std::map<std::string, CmpOp> ops = {{"<", CmpOp::lt}, {"<=", CmpOp::le},
                                                     {"=", CmpOp::eq}, {"!=", CmpOp::ne},
                                                     {">", CmpOp::gt}, {">=", CmpOp::ge}};
    if (peek().type != Token::symbol || !ops.contains(peek().text)) fail("expected a comparison");
    const CmpOp op = ops.at(tokens_[pos_++].text);
    auto [y, yo] = parse_term();
    return compare(x, op, y, yo - xo);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

const char* op_text(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

std::string letter_text(const std::string& a) {
  const bool plain = !a.empty() && (std::isalpha(static_cast<unsigned char>(a[0])) || a[0] == '_') &&
                     std::all_of(a.begin(), a.end(), [](char c) {
                       return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                     }) &&
                     a != "first" && a != "last";
  return plain ? a : "'" + a + "'";
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Formula& f) {
  switch (f->kind) {
    case Kind::truth: return "true";
    case Kind::falsity: return "false";
    case Kind::letter: return letter_text(f->letter) + "(" + f->var + ")";
    case Kind::compare: {
      std::string rhs = f->other;
      if (f->offset > 0) rhs += " + " + std::to_string(f->offset);
      if (f->offset < 0) rhs += " - " + std::to_string(-f->offset);
      return f->var + " " + op_text(f->op) + " " + rhs;
    }
    case Kind::member: return f->var + " in " + f->other;
    case Kind::first: return "first(" + f->var + ")";
    case Kind::last: return "last(" + f->var + ")";
    case Kind::singleton: return f->other + " = {" + f->var + "}";
    case Kind::negation: return "!(" + to_string(f->lhs) + ")";
    case Kind::conjunction: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Kind::disjunction: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Kind::implication: return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case Kind::equivalence: return "(" + to_string(f->lhs) + " <-> " + to_string(f->rhs) + ")";
    case Kind::exists:
    case Kind::forall: {
      std::string q = f->kind == Kind::exists ? "exists" : "forall";
      if (f->second_order) q += "2";
      return "(" + q + " " + f->var + ". " + to_string(f->lhs) + ")";
    }
  }
  return "?";
}

// -------------------------------------------------------- free variables

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound_fo,
                  std::vector<std::string>& bound_so, std::vector<Variable>& out) {
  auto note = [&](const std::string& name, bool second) {
    const auto& bound = second ? bound_so : bound_fo;
    if (std::find(bound.begin(), bound.end(), name) != bound.end()) return;
    for (const auto& v : out)
      if (v.name == name) {
        if (v.second_order != second)
          throw Error("variable '" + name + "' used both as a position and as a set");
        return;
      }
    out.push_back({name, second});
  };
  switch (f->kind) {
    case Kind::truth:
    case Kind::falsity: return;
    case Kind::letter:
    case Kind::first:
    case Kind::last: note(f->var, false); return;
    case Kind::compare:
      note(f->var, false);
      note(f->other, false);
      return;
    case Kind::member:
    case Kind::singleton:
      note(f->var, false);
      note(f->other, true);
      return;
    case Kind::negation: collect_free(f->lhs, bound_fo, bound_so, out); return;
    case Kind::conjunction:
    case Kind::disjunction:
    case Kind::implication:
    case Kind::equivalence:
      collect_free(f->lhs, bound_fo, bound_so, out);
      collect_free(f->rhs, bound_fo, bound_so, out);
      return;
    case Kind::exists:
    case Kind::forall: {
      auto& bound = f->second_order ? bound_so : bound_fo;
      bound.push_back(f->var);
      collect_free(f->lhs, bound_fo, bound_so, out);
      bound.pop_back();
      return;
    }
  }
}

}  // namespace

std::vector<Variable> free_variables(const Formula& f) {
  std::vector<std::string> fo, so;
  std::vector<Variable> out;
  collect_free(f, fo, so, out);
  return out;
}

// -------------------------------------------------------------- compiler

namespace {

// Builds a DFA by exploring states produced by `step` from `init`.
template <typename S, typename Step, typename Accept>
Dfa explore(const StructuredAlphabet& alphabet, S init, Step step, Accept accept) {
  std::map<S, State> index{{init, 0}};
  std::vector<S> states{init};
  std::vector<State> table;
  const auto sigma = static_cast<Letter>(alphabet.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    for (Letter l = 0; l < sigma; ++l) {
      S next = step(states[i], l);
      auto [it, inserted] = index.emplace(next, static_cast<State>(states.size()));
      if (inserted) states.push_back(next);
      table.push_back(it->second);
    }
  Dfa d(alphabet, states.size(), 0);
  for (State s = 0; s < states.size(); ++s) {
    d.set_final(s, accept(states[s]));
    for (Letter l = 0; l < sigma; ++l) d.set_step(s, l, table[s * sigma + l]);
  }
  return d;
}

struct Binding {
  std::string name;
  bool second_order;
};

class Compiler {
 public:
  Compiler(std::vector<std::string> base, std::vector<Binding> scope)
      : base_(std::move(base)), scope_(std::move(scope)) {}

  Dfa run(const Formula& f) { return go(f); }

  StructuredAlphabet alphabet() const {
    std::vector<std::string> tracks;
    for (std::size_t i = 0; i < scope_.size(); ++i)
      tracks.push_back(i < num_free_ ? scope_[i].name : "$" + std::to_string(i) + ":" + scope_[i].name);
    return StructuredAlphabet(base_, tracks);
  }

  void set_num_free(std::size_t n) { num_free_ = n; }

  Dfa singleton_track(std::size_t track) const {
    return explore(
        alphabet(), 0,
        [&](int s, Letter l) {
          if (!alphabet_bit(l, track)) return s;
          return s == 0 ? 1 : 2;
        },
        [](int s) { return s == 1; });
  }

 private:
  static bool alphabet_bit(Letter l, std::size_t track) { return (l >> track) & 1u; }

  std::size_t lookup(const std::string& name, bool second_order) const {
    for (std::size_t i = scope_.size(); i-- > 0;)
      if (scope_[i].name == name) {
        if (scope_[i].second_order != second_order)
          throw Error("variable '" + name + "' has the wrong sort");
        return i;
      }
    throw Error("unbound variable '" + name + "'");
  }

  std::size_t base_letter(const std::string& a) const {
    for (std::size_t i = 0; i < base_.size(); ++i)
      if (base_[i] == a) return i;
    throw Error("letter '" + a + "' is not in the alphabet");
  }

  Dfa go(const Formula& f) {
    const StructuredAlphabet a = alphabet();
    const std::size_t tracks = scope_.size();
    switch (f->kind) {
      case Kind::truth:
      case Kind::falsity: {
        Dfa d(a, 1, 0);
        d.set_final(0, f->kind == Kind::truth);
        return d;
      }
      case Kind::letter: {
        const std::size_t x = lookup(f->var, false);
        const std::size_t b = base_letter(f->letter);
        return explore(
            a, 0,
            [&](int s, Letter l) { return s || (alphabet_bit(l, x) && (l >> tracks) == b) ? 1 : 0; },
            [](int s) { return s == 1; });
      }
      case Kind::member: {
        const std::size_t x = lookup(f->var, false);
        const std::size_t set = lookup(f->other, true);
        return explore(
            a, 0,
            [&](int s, Letter l) { return s || (alphabet_bit(l, x) && alphabet_bit(l, set)) ? 1 : 0; },
            [](int s) { return s == 1; });
      }
      case Kind::singleton: {
        const std::size_t x = lookup(f->var, false);
        const std::size_t set = lookup(f->other, true);
        return explore(
            a, 0,
            [&](int s, Letter l) { return s || alphabet_bit(l, x) != alphabet_bit(l, set) ? 1 : 0; },
            [](int s) { return s == 0; });
      }
      case Kind::first: {
        const std::size_t x = lookup(f->var, false);
        // 0 = start, 1 = x at first position, 2 = not.
        return explore(
            a, 0, [&](int s, Letter l) { return s ? s : (alphabet_bit(l, x) ? 1 : 2); },
            [](int s) { return s == 1; });
      }
      case Kind::last: {
        const std::size_t x = lookup(f->var, false);
        return explore(
            a, 0, [&](int, Letter l) { return alphabet_bit(l, x) ? 1 : 0; },
            [](int s) { return s == 1; });
      }
      case Kind::compare: return compile_compare(f, a);
      case Kind::negation: return complement(go(f->lhs));
      case Kind::conjunction: return minimize(intersect(go(f->lhs), go(f->rhs)));
      case Kind::disjunction: return minimize(unite(go(f->lhs), go(f->rhs)));
      case Kind::implication: return minimize(unite(complement(go(f->lhs)), go(f->rhs)));
      case Kind::equivalence: {
        const Dfa l = go(f->lhs), r = go(f->rhs);
        return minimize(unite(intersect(l, r), intersect(complement(l), complement(r))));
      }
      case Kind::exists:
      case Kind::forall: {
        const bool universal = f->kind == Kind::forall;
        scope_.push_back({f->var, f->second_order});
        Dfa body = go(f->lhs);
        if (universal) body = complement(body);
        if (!f->second_order) body = intersect(body, singleton_track(scope_.size() - 1));
        scope_.pop_back();
        Dfa projected = minimize(project_track(body, tracks));
        return universal ? complement(projected) : projected;
      }
    }
    throw Error("unknown formula node");
  }

  // var - other  op  offset, with the distance counter capped.
  Dfa compile_compare(const Formula& f, const StructuredAlphabet& a) {
    const std::size_t x = lookup(f->var, false);
    const std::size_t y = lookup(f->other, false);
    const int cap = std::abs(f->offset) + 2;
    // State: phase (0 none, 1 x seen, 2 y seen, 3 done) and a counter; in
    // phase 3 the counter holds pos(x) - pos(y) clipped to [-cap, cap].
    using S = std::pair<int, int>;
    auto clip = [cap](int v) { return std::max(-cap, std::min(cap, v)); };
    auto step = [&](S s, Letter l) -> S {
      const bool bx = alphabet_bit(l, x), by = alphabet_bit(l, y);
      switch (s.first) {
        case 0:
          if (bx && by) return {3, 0};
          if (bx) return {1, 0};
          if (by) return {2, 0};
          return s;
        case 1:
          if (by) return {3, clip(-(s.second + 1))};
          return {1, std::min(cap, s.second + 1)};
        case 2:
          if (bx) return {3, clip(s.second + 1)};
          return {2, std::min(cap, s.second + 1)};
        default: return s;
      }
    };
    auto accept = [&](S s) {
      if (s.first != 3) return false;
      const int d = s.second, k = f->offset;
      switch (f->op) {
        case CmpOp::lt: return d < k;
        case CmpOp::le: return d <= k;
        case CmpOp::eq: return d == k;
        case CmpOp::ne: return d != k;
        case CmpOp::gt: return d > k;
        case CmpOp::ge: return d >= k;
      }
      return false;
    };
    return minimize(explore(a, S{0, 0}, step, accept));
  }

  std::vector<std::string> base_;
  std::vector<Binding> scope_;
  std::size_t num_free_ = 0;
};

}  // namespace

Dfa compile(const Formula& f, const std::vector<std::string>& base,
            const std::vector<Variable>& signature) {
  std::vector<Binding> scope;
  std::set<std::string> seen;
  for (const auto& v : signature) {
    if (!seen.insert(v.name).second) throw Error("duplicate signature variable '" + v.name + "'");
    scope.push_back({v.name, v.second_order});
  }
  Compiler c(base, scope);
  c.set_num_free(scope.size());
  Dfa d = c.run(f);
  // Free first-order tracks carry exactly one position; the empty word is
  // never a model.
  for (std::size_t i = 0; i < signature.size(); ++i)
    if (!signature[i].second_order) d = intersect(d, c.singleton_track(i));
  Dfa nonempty(d.alphabet(), 2, 0);
  for (Letter l = 0; l < d.alphabet().size(); ++l) {
    nonempty.set_step(0, l, 1);
    nonempty.set_step(1, l, 1);
  }
  nonempty.set_final(1);
  return minimize(intersect(d, nonempty));
}

}  // namespace origami::mso

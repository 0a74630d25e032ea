#pragma once
// Monadic second-order logic over finite words and its compilation to
// automata over structured alphabets (one boolean track per free variable).

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "origami/automata.hpp"

namespace origami::mso {

enum class Kind {
  truth,
  falsity,
  letter,      // a(x)
  compare,     // x op y + offset
  member,      // x in X
  first,       // first(x)
  last,        // last(x)
  singleton,   // X = {x}
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  exists,
  forall,
};

enum class CmpOp { lt, le, eq, ne, gt, ge };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::truth;
  std::string letter;        // letter tests
  std::string var;           // first-order operand, or the bound variable
  std::string other;         // second operand (y, or the set X)
  CmpOp op = CmpOp::eq;
  int offset = 0;            // compare: var op other + offset
  bool second_order = false; // quantifiers
  Formula lhs, rhs;
};

Formula tt();
Formula ff();
Formula letter(std::string a, std::string x);
Formula compare(std::string x, CmpOp op, std::string y, int offset = 0);
Formula member(std::string x, std::string set);
Formula first(std::string x);
Formula last(std::string x);
Formula singleton(std::string set, std::string x);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula exists(std::string x, Formula body);
Formula forall(std::string x, Formula body);
Formula exists2(std::string set, Formula body);
Formula forall2(std::string set, Formula body);

/// Conjunction / disjunction of a list; empty lists give true / false.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

/// Surface syntax, e.g. `exists z. x < z & z < y -> z notin R`.
Formula parse(std::string_view text);
std::string to_string(const Formula& f);

struct Variable {
  std::string name;
  bool second_order = false;
};

/// Free variables of `f` in order of first occurrence, sorts inferred from use.
std::vector<Variable> free_variables(const Formula& f);

/// Compiles `f` to a minimal DFA over `base` with one track per signature
/// variable (in signature order). Accepted words are exactly the non-empty
/// models; first-order tracks carry exactly one 1-bit. Throws Error on
/// unbound variables or sort clashes.
Dfa compile(const Formula& f, const std::vector<std::string>& base,
            const std::vector<Variable>& signature);

}  // namespace origami::mso

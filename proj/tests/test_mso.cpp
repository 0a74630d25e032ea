#include <bit>

#include "doctest.h"
#include "oracles.hpp"
#include "origami/error.hpp"
#include "origami/mso.hpp"

using namespace origami;

namespace {

const std::vector<std::string> kAB{"a", "b"};

// Extended word for base word `w` with one track per signature variable.
Word encode(const Dfa& d, const std::vector<std::size_t>& w, const std::vector<std::uint32_t>& track_masks) {
  Word out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::uint32_t bits = 0;
    for (std::size_t t = 0; t < track_masks.size(); ++t)
      if ((track_masks[t] >> i) & 1) bits |= 1u << t;
    out.push_back(d.alphabet().letter(w[i], bits));
  }
  return out;
}

// Compares compiled acceptance with the naive evaluator on every word up to
// `max_len` and every valuation (including malformed first-order tracks).
void check_against_oracle(const std::string& text, const std::vector<mso::Variable>& sig, int max_len) {
  CAPTURE(text);
  const auto f = mso::parse(text);
  const Dfa d = mso::compile(f, kAB, sig);
  for (int n = 1; n <= max_len; ++n) {
    const std::uint32_t masks = 1u << n;
    std::size_t combos = 1;
    for (std::size_t t = 0; t < sig.size(); ++t) combos *= masks;
    for (std::uint32_t wm = 0; wm < masks; ++wm) {
      std::vector<std::size_t> w;
      std::vector<std::string> names;
      for (int i = 0; i < n; ++i) {
        w.push_back((wm >> i) & 1);
        names.push_back(kAB[(wm >> i) & 1]);
      }
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::uint32_t> tm;
        std::size_t rest = c;
        for (std::size_t t = 0; t < sig.size(); ++t) {
          tm.push_back(static_cast<std::uint32_t>(rest % masks));
          rest /= masks;
        }
        oracle::Valuation v;
        bool well_formed = true;
        for (std::size_t t = 0; t < sig.size(); ++t) {
          if (sig[t].second_order) {
            std::set<int> s;
            for (int i = 0; i < n; ++i)
              if ((tm[t] >> i) & 1) s.insert(i);
            v.sets[sig[t].name] = s;
          } else if (std::popcount(tm[t]) == 1) {
            v.pos[sig[t].name] = std::countr_zero(tm[t]);
          } else {
            well_formed = false;
          }
        }
        const bool expected = well_formed && oracle::eval(f, names, v);
        CHECK(d.accepts(encode(d, w, tm)) == expected);
      }
    }
  }
}

}  // namespace

TEST_CASE("compiled formulas agree with the naive evaluator") {
  using V = mso::Variable;
  const std::vector<V> xy{{"x"}, {"y"}};
  check_against_oracle("x = y + 1 | y = x + 1", xy, 6);
  check_against_oracle("x <= y & y <= x + 3", xy, 6);
  check_against_oracle("x != y - 2", xy, 6);
  check_against_oracle("first(x) & last(y)", xy, 6);
  check_against_oracle("a(x) <-> b(y)", xy, 6);
  check_against_oracle("exists z. x < z & z < y & a(z)", xy, 6);
  check_against_oracle("forall z. (x <= z & z <= y) -> a(z)", xy, 6);
  check_against_oracle("exists x. x in X & a(x)", {V{"X", true}}, 6);
  check_against_oracle("X = {x} | x = y", {V{"X", true}, V{"x"}, V{"y"}}, 5);
  check_against_oracle("exists2 Y. forall z. (z in Y <-> !(z in X))", {V{"X", true}}, 5);
  check_against_oracle(
      "x in R & x < y & forall z. (x < z & z < y -> z notin R)", {V{"R", true}, V{"x"}, V{"y"}}, 5);
  check_against_oracle("exists z. !(exists w. w + 1 = z) & z = x", {V{"x"}}, 6);
  check_against_oracle("true", {}, 6);
  check_against_oracle("false | !true", {}, 6);
}

TEST_CASE("pm1 example words") {
  const Dfa d = mso::compile(mso::parse("(x = y + 1) | (y = x + 1)"), {"a"}, {{"x"}, {"y"}});
  const auto& al = d.alphabet();
  CHECK(d.accepts(Word{al.letter(0, 0), al.letter(0, 1), al.letter(0, 2)}));
  CHECK_FALSE(d.accepts(Word{al.letter(0, 1), al.letter(0, 0), al.letter(0, 2)}));
}

TEST_CASE("true accepts exactly the non-empty words") {
  const Dfa d = mso::compile(mso::tt(), kAB, {});
  CHECK_FALSE(d.accepts(Word{}));
  for (const Word& w : oracle::all_words(2, 5))
    if (!w.empty()) CHECK(d.accepts(w));
}

TEST_CASE("projection of the set example is 'contains an a'") {
  const Dfa d = mso::compile(mso::parse("exists x. x in X & a(x)"), kAB, {{"X", true}});
  const auto& al = d.alphabet();
  CHECK(d.accepts(Word{al.letter(0, 0), al.letter(1, 1), al.letter(0, 1)}));
  CHECK_FALSE(d.accepts(Word{al.letter(0, 0), al.letter(1, 1), al.letter(0, 0)}));
  const Dfa projected = minimize(project_track(d, 0));
  // Direct automaton for "contains at least one a".
  Dfa direct(projected.alphabet(), 2, 0);
  direct.set_step(0, 0, 1);
  direct.set_step(0, 1, 0);
  direct.set_step(1, 0, 1);
  direct.set_step(1, 1, 1);
  direct.set_final(1);
  CHECK(equivalent(projected, direct));
}

TEST_CASE("witness of first(x) & last(x)") {
  const Dfa d = mso::compile(mso::parse("first(x) & last(x)"), {"a"}, {{"x"}});
  const auto w = find_witness(d);
  REQUIRE(w);
  CHECK(*w == Word{d.alphabet().letter(0, 1)});
}

TEST_CASE("parser round trip and errors") {
  for (const char* text : {"exists z. x < z & z < y -> z notin R", "X = {x} | x = y",
                           "forall2 Y. exists y. y in Y | '#'(y)", "!(x >= y - 3) <-> first(x)"}) {
    const auto f = mso::parse(text);
    CHECK(mso::to_string(mso::parse(mso::to_string(f))) == mso::to_string(f));
  }
  CHECK_THROWS_AS(mso::parse("x <"), ParseError);
  CHECK_THROWS_AS(mso::parse("exists . a(x)"), ParseError);
  CHECK_THROWS_AS(mso::compile(mso::parse("a(z)"), kAB, {{"x"}}), Error);
  CHECK_THROWS_AS(mso::compile(mso::parse("x in x"), kAB, {{"x"}}), Error);
  const auto fv = mso::free_variables(mso::parse("exists z. z in R & x < z"));
  REQUIRE(fv.size() == 2);
  CHECK(fv[0].name == "R");
  CHECK(fv[0].second_order);
  CHECK(fv[1].name == "x");
}

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "origami/automata.hpp"
#include "origami/error.hpp"

using namespace origami;

namespace {

Nfa random_nfa(std::mt19937& rng, std::size_t states, std::size_t tracks) {
  std::vector<std::string> names;
  for (std::size_t t = 0; t < tracks; ++t) names.push_back("t" + std::to_string(t));
  Nfa n(StructuredAlphabet({"a", "b"}, names));
  std::uniform_int_distribution<int> coin(0, 3);
  for (std::size_t s = 0; s < states; ++s) n.add_state(s == 0, coin(rng) == 0);
  std::uniform_int_distribution<State> pick(0, static_cast<State>(states - 1));
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(n.alphabet().size() - 1));
  for (std::size_t k = 0; k < states * 3; ++k) n.add_transition(pick(rng), letter(rng), pick(rng));
  return n;
}

}  // namespace

TEST_CASE("letter packing round trips") {
  StructuredAlphabet a({"a", "b", "c"}, {"X", "y"});
  CHECK(a.size() == 12);
  const Letter l = a.letter(2, 0b10);
  CHECK(a.base_of(l) == 2);
  CHECK(a.bit(l, 1));
  CHECK_FALSE(a.bit(l, 0));
  CHECK(a.format_letter(l) == "c[0 1]");
  CHECK(drop_bit(insert_bit(l, 1, true), 1) == l);
  CHECK(a.without_track(0).tracks() == std::vector<std::string>{"y"});
}

TEST_CASE("determinize and minimize preserve the language") {
  std::mt19937 rng(7);
  for (int round = 0; round < 30; ++round) {
    const Nfa n = random_nfa(rng, 5, round % 2);
    const Dfa d = determinize(n);
    const Dfa m = minimize(d);
    CHECK(m.num_states() <= d.num_states());
    CHECK(equivalent(d, m));
    for (const Word& w : oracle::all_words(n.alphabet().size(), 5)) {
      const bool expected = oracle::count_runs_dfs(n, w) > 0;
      CHECK(d.accepts(w) == expected);
      CHECK(m.accepts(w) == expected);
      CHECK(count_runs(n, w) == oracle::count_runs_dfs(n, w));
    }
  }
}

TEST_CASE("boolean operations and projection agree with brute force") {
  std::mt19937 rng(11);
  for (int round = 0; round < 20; ++round) {
    const Nfa a = random_nfa(rng, 4, 1);
    const Nfa b = random_nfa(rng, 4, 1);
    const Dfa da = determinize(a), db = determinize(b);
    const Dfa both = intersect(da, db), either = unite(da, db), neg = complement(da);
    const Nfa prod = intersect(a, b);
    const Dfa proj = project_track(da, 0);
    const Dfa proj_n = determinize(project_track(a, "t0"));
    CHECK(equivalent(proj, proj_n));
    for (const Word& w : oracle::all_words(a.alphabet().size(), 4)) {
      const bool in_a = da.accepts(w), in_b = db.accepts(w);
      CHECK(both.accepts(w) == (in_a && in_b));
      CHECK(either.accepts(w) == (in_a || in_b));
      CHECK(neg.accepts(w) == !in_a);
      CHECK(count_runs(prod, w) == oracle::count_runs_dfs(a, w) * oracle::count_runs_dfs(b, w));
    }
    // Projection: w accepted iff some labelling of the track is accepted.
    for (const Word& w : oracle::all_words(2, 3)) {
      bool some = false;
      for (std::uint32_t mask = 0; mask < (1u << w.size()); ++mask) {
        Word lifted;
        for (std::size_t i = 0; i < w.size(); ++i) lifted.push_back(insert_bit(w[i], 0, (mask >> i) & 1));
        some = some || da.accepts(lifted);
      }
      CHECK(proj.accepts(w) == some);
    }
  }
}

TEST_CASE("witness is the length-lex least accepted word") {
  std::mt19937 rng(3);
  for (int round = 0; round < 30; ++round) {
    const Nfa n = random_nfa(rng, 5, 0);
    std::optional<Word> expected;
    for (const Word& w : oracle::all_words(2, 6))
      if (oracle::count_runs_dfs(n, w) > 0) {
        expected = w;
        break;
      }
    const auto got = find_witness(n);
    if (expected) {
      REQUIRE(got);
      CHECK(*got == *expected);
      CHECK(find_witness(determinize(n))->size() == expected->size());
    } else if (got) {
      CHECK(got->size() > 6);
    }
  }
}

TEST_CASE("ambiguity classes of small automata") {
  StructuredAlphabet sigma({"a"}, {});
  SUBCASE("finite") {
    Nfa n(sigma);
    n.add_state(true, true);
    n.add_state(true, true);
    n.add_transition(0, 0, 0);
    n.add_transition(1, 0, 1);
    CHECK(ambiguity_class(n).cls == Ambiguity::finite);
  }
  SUBCASE("polynomial") {
    Nfa n(sigma);
    n.add_state(true, false);
    n.add_state(false, true);
    n.add_transition(0, 0, 0);
    n.add_transition(0, 0, 1);
    n.add_transition(1, 0, 1);
    const auto r = ambiguity_class(n);
    CHECK(r.cls == Ambiguity::polynomial);
    REQUIRE(r.pattern);
    CHECK(r.pattern->p != r.pattern->q);
    // Number of runs on a^n is n: linear growth.
    CHECK(count_runs(n, Word(10, 0)) == 10);
  }
  SUBCASE("exponential") {
    Nfa n(sigma);
    n.add_state(true, true);
    n.add_transition(0, 0, 0);
    n.add_transition(0, 0, 0);
    const auto r = ambiguity_class(n);
    CHECK(r.cls == Ambiguity::exponential);
    CHECK(count_runs(n, Word(10, 0)) == 1024);
  }
  SUBCASE("useless states are ignored") {
    Nfa n(sigma);
    n.add_state(true, true);
    n.add_state(false, false);
    n.add_transition(0, 0, 0);
    n.add_transition(0, 0, 1);
    n.add_transition(1, 0, 1);
    n.add_transition(1, 0, 1);
    CHECK(ambiguity_class(n).cls == Ambiguity::finite);
  }
}

TEST_CASE("ambiguity class matches run growth on random automata") {
  std::mt19937 rng(5);
  for (int round = 0; round < 60; ++round) {
    const Nfa n = trim(random_nfa(rng, 4, 0));
    const auto r = ambiguity_class(n);
    if (r.cls == Ambiguity::finite) continue;
    REQUIRE(r.pattern);
    const Word& v = r.pattern->word;
    REQUIRE_FALSE(v.empty());
    // Pump the witness: runs from p through p->...->q grow unboundedly.
    auto runs_between = [&](State from, State to, const Word& w) {
      Nfa m = n;
      for (State s = 0; s < m.num_states(); ++s) {
        m.set_initial(s, s == from);
        m.set_final(s, s == to);
      }
      return count_runs(m, w);
    };
    Word v2 = v;
    v2.insert(v2.end(), v.begin(), v.end());
    if (r.cls == Ambiguity::exponential) {
      CHECK(runs_between(r.pattern->p, r.pattern->p, v) >= 2);
    } else {
      CHECK(runs_between(r.pattern->p, r.pattern->p, v) >= 1);
      CHECK(runs_between(r.pattern->p, r.pattern->q, v) >= 1);
      CHECK(runs_between(r.pattern->q, r.pattern->q, v) >= 1);
      CHECK(runs_between(r.pattern->p, r.pattern->q, v2) >= 2);
    }
  }
}

TEST_CASE("text format round trips") {
  const std::string text =
      "alphabet: a b\ntracks: X\nstates: p q\ninitial: p\nfinal: q\n"
      "# comment\np -- a[1] --> q\nq -- b[0] --> q\n";
  const Nfa n = parse_automaton(text);
  CHECK(n.num_states() == 2);
  CHECK(n.num_transitions() == 2);
  const Nfa back = parse_automaton(format_automaton(n));
  CHECK(equivalent(determinize(n), determinize(back)));
  CHECK_THROWS_AS(parse_automaton("alphabet: a\nstates: p\np -- c --> p\n"), ParseError);
}

#include "doctest.h"
#include "oracles.hpp"
#include "origami/error.hpp"
#include "origami/transducer.hpp"

using namespace origami;

namespace {

SymWord a_n(std::size_t n) { return SymWord(n, 0); }

std::vector<int> iota1(int n) {
  std::vector<int> v;
  for (int i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("identity and reversal on a^6 have unique graphs") {
  const Transducer id = oracle::load("id.2nt"), rev = oracle::load("rev.2nt");
  const RunCaps caps{10, 50};
  const GraphSet gi = run_origin_graphs(id, a_n(6), caps);
  REQUIRE(gi.graphs.size() == 1);
  CHECK(gi.graphs[0].origin == iota1(6));
  const GraphSet gr = run_origin_graphs(rev, a_n(6), caps);
  REQUIRE(gr.graphs.size() == 1);
  CHECK(gr.graphs[0].origin == std::vector<int>{6, 5, 4, 3, 2, 1});
  CHECK_FALSE(gi.pruned);
}

TEST_CASE("one-two on a^2") {
  const Transducer t = oracle::load("one_two.1nt");
  const GraphSet g = run_origin_graphs(t, a_n(2), {10, 50});
  REQUIRE(g.graphs.size() == 3);
  std::map<std::size_t, std::vector<int>> by_len;
  for (const auto& graph : g.graphs) by_len[graph.output.size()] = graph.origin;
  CHECK(by_len[2] == std::vector<int>{1, 2});
  CHECK(by_len[3] == std::vector<int>{1, 2, 2});
  CHECK(by_len[4] == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("classical semantics") {
  const RunCaps caps{10, 50};
  for (const char* name : {"one_two.1nt", "two_one.1nt"}) {
    const PairSet p = classical_pairs(oracle::load(name), 4, caps);
    std::set<std::pair<SymWord, SymWord>> expected;
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t m = n; m <= 2 * n; ++m) expected.emplace(a_n(n), a_n(m));
    CHECK(p.pairs == expected);
  }
  const PairSet id = classical_pairs(oracle::load("id.2nt"), 3, caps);
  CHECK(id.pairs == std::set<std::pair<SymWord, SymWord>>{{a_n(1), a_n(1)}, {a_n(2), a_n(2)}, {a_n(3), a_n(3)}});
  Transducer none(TransducerKind::one_way, {"a"}, {"a"});
  none.add_state("p", true, false);
  CHECK(classical_pairs(none, 3, caps).pairs.empty());
}

TEST_CASE("enumeration agrees with run recursion") {
  const RunCaps caps{6, 12};
  for (const char* name : {"one_two.1nt", "two_one.1nt", "first.1nt", "last.1nt", "fast.1nt",
                           "slow.1nt", "id.2nt", "rev.2nt"}) {
    CAPTURE(name);
    const Transducer t = oracle::load(name);
    for_each_word(t.input_alphabet().size(), 1, 3, [&](const SymWord& u) {
      const GraphSet g = run_origin_graphs(t, u, caps);
      const auto expected = oracle::graphs_by_recursion(t, u, caps.max_output, caps.max_steps);
      CHECK(std::set<OriginGraph>(g.graphs.begin(), g.graphs.end()) == expected);
      for (const auto& graph : g.graphs)
        for (int o : graph.origin) CHECK((o >= 1 && o <= static_cast<int>(u.size())));
      // Targeted enumeration returns exactly the graphs with that output.
      for (const auto& graph : g.graphs) {
        const GraphSet h = run_origin_graphs(t, u, graph.output, caps);
        CHECK(std::find(h.graphs.begin(), h.graphs.end(), graph) != h.graphs.end());
        for (const auto& other : h.graphs) CHECK(other.output == graph.output);
      }
    });
  }
}

TEST_CASE("larger caps never lose graphs") {
  const Transducer t = oracle::load("slow.1nt");
  for (std::size_t cap = 1; cap < 6; ++cap) {
    const auto small = run_origin_graphs(t, a_n(3), {cap, 3 * cap});
    const auto large = run_origin_graphs(t, a_n(3), {cap + 1, 3 * cap + 3});
    CHECK(std::includes(large.graphs.begin(), large.graphs.end(), small.graphs.begin(), small.graphs.end()));
  }
}

TEST_CASE("origin equivalence") {
  const RunCaps caps{6, 30};
  const Transducer id = oracle::load("id.2nt"), rev = oracle::load("rev.2nt");
  const auto r = origin_equivalent_upto(id, rev, 4, caps);
  CHECK_FALSE(r.equal);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->input.size() == 2);
  CHECK(origin_equivalent_upto(id, id, 4, caps).equal);
  const auto fl = origin_equivalent_upto(oracle::load("first.1nt"), oracle::load("last.1nt"), 3, caps);
  CHECK_FALSE(fl.equal);
  CHECK(fl.counterexample->input.size() == 2);
}

TEST_CASE("text formats") {
  const Transducer t = oracle::load("rev.2nt");
  const Transducer back = parse_transducer(format_transducer(t));
  CHECK(format_transducer(back) == format_transducer(t));
  CHECK_THROWS_AS(parse_transducer("kind: 2nt\ninput-alphabet: a\noutput-alphabet: a\nstates: p\n"
                                   "p -- eps / a, R --> p\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_transducer("kind: 2nt\ninput-alphabet: a\noutput-alphabet: a\nstates: p\n"
                                   "p -- > / eps, R --> p\n"),
                  ParseError);
  const std::vector<std::string> gamma{"q0", "q1", "#", "B", "a"};
  CHECK(parse_word(gamma, "q0#q1B") == SymWord{0, 2, 1, 3});
  CHECK(parse_word(gamma, "eps").empty());
  const OriginGraph g = parse_origin_graph(t, "input: a a a\noutput: a a\norigin: 3 1\n");
  CHECK(g.origin == std::vector<int>{3, 1});
  CHECK_THROWS_AS(parse_origin_graph(t, "input: a\noutput: a\norigin: 2\n"), ParseError);
  CHECK(origin_graph_dot(t.input_alphabet(), t.output_alphabet(), g).find("o1 -> i3") != std::string::npos);
}

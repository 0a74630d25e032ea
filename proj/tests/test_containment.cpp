#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "origami/containment.hpp"
#include "origami/error.hpp"
#include "origami/traversal.hpp"

using namespace origami;

namespace {

const RunCaps kCaps{32, 200};
// first/last output every word, so their graphs are cut at short outputs.
const RunCaps kShort{4, 64};

// Random one-way transducer over {a,b} -> {a,b}; epsilon moves only go to
// higher states, so every input has finitely many runs.
Transducer random_1nt(std::mt19937& rng, bool unary = false) {
  const std::vector<std::string> ab = unary ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "b"};
  Transducer t(TransducerKind::one_way, ab, ab);
  const int sigma = static_cast<int>(ab.size());
  std::uniform_int_distribution<int> states(1, 3), coin(0, 2), sym(0, sigma - 1), olen(0, 2);
  const int q = states(rng);
  for (int s = 0; s < q; ++s) t.add_state("q" + std::to_string(s), s == 0, coin(rng) == 0 || s == q - 1);
  auto out = [&] {
    SymWord w(static_cast<std::size_t>(olen(rng)));
    for (auto& c : w) c = static_cast<Symbol>(sym(rng));
    return w;
  };
  std::uniform_int_distribution<int> any(0, q - 1);
  for (int s = 0; s < q; ++s) {
    for (int a = 0; a < sigma; ++a)
      for (int e = coin(rng); e < 2; ++e)
        t.add_transition({static_cast<std::uint32_t>(s), a, out(), Direction::right, static_cast<std::uint32_t>(any(rng))});
    if (s + 1 < q && coin(rng) == 0)
      t.add_transition({static_cast<std::uint32_t>(s), kEpsilon, out(), Direction::right,
                        static_cast<std::uint32_t>(s + 1 + coin(rng) % (q - s - 1))});
  }
  return t;
}

int naive_count(const OriginGraph& s, const OriginGraph& t) {
  const int n = static_cast<int>(s.input.size());
  int best = 0;
  for (int z = 1; z <= n; ++z) {
    std::set<int> lr, rl;
    for (std::size_t p = 0; p < s.origin.size(); ++p) {
      if (s.origin[p] <= z && t.origin[p] > z) lr.insert(s.origin[p]);
      if (s.origin[p] >= z && t.origin[p] < z) rl.insert(s.origin[p]);
    }
    best = std::max({best, static_cast<int>(lr.size()), static_cast<int>(rl.size())});
  }
  return best;
}

std::vector<OriginGraph> with_output(const std::set<OriginGraph>& all, const SymWord& v) {
  std::vector<OriginGraph> r;
  for (const auto& g : all)
    if (g.output == v) r.push_back(g);
  return r;
}

// Containment by enumerating every graph on both sides.
bool contains_brute(const Transducer& t1, const Transducer& t2, const std::string& gamma,
                    const std::vector<std::string>& params, std::size_t max_len) {
  bool ok = true;
  for_each_word(2, 1, max_len, [&](const SymWord& u) {
    const auto g2 = oracle::graphs_by_recursion(t2, u, 64, 64);
    for (const auto& g : oracle::graphs_by_recursion(t1, u, 64, 64)) {
      bool matched = false;
      for (const auto& p : with_output(g2, g.output))
        matched = matched || oracle::resync_member_brute(mso::parse(gamma), params, {"a", "b"}, p, g).has_value();
      ok = ok && matched;
    }
  });
  return ok;
}

// profile(n) by enumeration; -1 encodes infinity.
int profile_brute(const Transducer& t1, const Transducer& t2, std::size_t sigma, std::size_t n) {
  int best = 0;
  for_each_word(sigma, n, n, [&](const SymWord& u) {
    const auto g2 = oracle::graphs_by_recursion(t2, u, 64, 64);
    for (const auto& g : oracle::graphs_by_recursion(t1, u, 64, 64)) {
      int m = -1;
      for (const auto& p : with_output(g2, g.output)) {
        const int c = naive_count(p, g);
        if (m < 0 || c < m) m = c;
      }
      if (best >= 0) best = m < 0 ? -1 : std::max(best, m);
    }
  });
  return best;
}

}  // namespace

TEST_CASE("containment examples") {
  const Transducer first = oracle::load("first.1nt"), last = oracle::load("last.1nt");
  const auto v = contains_upto(last, first, make_first_to_last(first.input_alphabet()), 4, kShort);
  CHECK(v.holds);
  CHECK(v.graphs_checked > 0);
  CHECK(v.pruned);
  CHECK_FALSE(contains_upto(last, first, make_identity(first.input_alphabet()), 3, kShort).holds);

  const Transducer fast = oracle::load("fast.1nt"), slow = oracle::load("slow.1nt");
  CHECK(contains_upto(slow, fast, make_to_first({"a"}), 4, kCaps).holds);

  const Transducer id = oracle::load("id.2nt"), rev = oracle::load("rev.2nt");
  const auto f = contains_upto(id, rev, make_pm1({"a"}), 4, kCaps);
  CHECK_FALSE(f.holds);
  REQUIRE(f.counterexample);
  // The strict shift already fails at a^1, where no neighbour exists.
  CHECK(f.counterexample->input.size() == 1);
  REQUIRE(f.nearest);
  CHECK_FALSE(pair_in_resync(make_pm1({"a"}), *f.nearest, *f.counterexample).accepted);
  const auto lazy = contains_upto(id, rev, make_resync({"a"}, {}, "x = y | x = y + 1 | y = x + 1"), 4, kCaps);
  REQUIRE(lazy.counterexample);
  CHECK(lazy.counterexample->input.size() == 3);

  CHECK_THROWS_AS(contains_upto(first, fast, make_identity({"a"}), 2, kCaps), AlphabetMismatch);
}

TEST_CASE("reflexivity on the corpus") {
  for (const char* name : {"id.2nt", "rev.2nt", "one_two.1nt", "two_one.1nt", "first.1nt", "last.1nt",
                           "fast.1nt", "slow.1nt"}) {
    const Transducer t = oracle::load(name);
    const RunCaps caps = t.input_alphabet().size() > 1 ? kShort : kCaps;
    CHECK_MESSAGE(contains_upto(t, t, make_identity(t.input_alphabet()), 4, caps).holds, name);
  }
}

TEST_CASE("containment agrees with enumeration") {
  std::mt19937 rng(23);
  const std::vector<std::pair<std::string, std::vector<std::string>>> gammas = {
      {"x = y", {}}, {"y <= x & x <= y + 1", {}}, {"x = y + 1 | y = x + 1 | x = y", {}},
      {"I = {x} | x = y", {"I"}}, {"true", {}}};
  int holds = 0;
  for (int it = 0; it < 120; ++it) {
    const Transducer t1 = random_1nt(rng), t2 = random_1nt(rng);
    const auto& [g, params] = gammas[static_cast<std::size_t>(it) % gammas.size()];
    const Resynchronizer r = make_resync({"a", "b"}, params, g);
    std::vector<GraphPair> used;
    const Verdict v = contains_upto(t1, t2, r, 3, kCaps, &used);
    REQUIRE(v.holds == contains_brute(t1, t2, g, params, 3));
    holds += v.holds;
    for (const auto& [p, q] : used) CHECK(pair_in_resync(r, p, q).accepted);
    if (!v.holds) {
      REQUIRE(v.counterexample);
      const auto g2 = oracle::graphs_by_recursion(t2, v.counterexample->input, 64, 64);
      for (const auto& p : with_output(g2, v.counterexample->output)) CHECK_FALSE(pair_in_resync(r, p, *v.counterexample).accepted);
    }
  }
  CHECK(holds > 10);
}

TEST_CASE("profile agrees with enumeration") {
  std::mt19937 rng(29);
  int positive = 0, infinite = 0;
  for (int it = 0; it < 300; ++it) {
    const bool unary = it % 2;
    const Transducer t1 = random_1nt(rng, unary), t2 = random_1nt(rng, unary);
    const auto p = traversal_profile(t1, t2, unary ? 7 : 4, kCaps);
    for (const auto& e : p.entries) {
      const int expect = profile_brute(t1, t2, unary ? 1 : 2, e.length);
      REQUIRE(e.infinite == (expect < 0));
      positive += expect > 0;
      infinite += expect < 0;
      if (expect >= 0) {
        CHECK(e.value == expect);
        if (e.witness && e.partner) CHECK(naive_count(*e.partner, *e.witness) == e.value);
      }
    }
  }
  CHECK(positive > 30);
  CHECK(infinite > 30);
}

TEST_CASE("profile values") {
  const Transducer id = oracle::load("id.2nt"), rev = oracle::load("rev.2nt");
  const auto p = traversal_profile(id, rev, 14, kCaps);
  for (const auto& e : p.entries) CHECK(e.value == static_cast<int>(e.length / 2));
  // floor(n/2) only rises every other length.
  CHECK(p.increasing_run == 2);

  const Transducer one_two = oracle::load("one_two.1nt"), two_one = oracle::load("two_one.1nt");
  std::vector<int> o1, o2;
  for (int x = 1; x <= 10; ++x)
    for (int c = x <= 5 ? 1 : 2; c > 0; --c) o1.push_back(x);
  for (int x = 1; x <= 10; ++x)
    for (int c = x <= 5 ? 2 : 1; c > 0; --c) o2.push_back(x);
  const OriginGraph g{SymWord(10, 0), SymWord(15, 0), o1};
  OriginGraph partner;
  CHECK(best_partner(two_one, g, kCaps, &partner) == 3);
  CHECK(partner.origin == o2);

  for (const char* name : {"one_two.1nt", "fast.1nt", "id.2nt"}) {
    const Transducer t = oracle::load(name);
    for (const auto& e : traversal_profile(t, t, 6, kCaps).entries) CHECK(e.value == 0);
  }

  const Transducer fast = oracle::load("fast.1nt"), slow = oracle::load("slow.1nt");
  for (const auto& e : traversal_profile(fast, slow, 8, kCaps).entries)
    CHECK(e.value == static_cast<int>(e.length) - 1);
}

TEST_CASE("R_k search") {
  const Transducer fast = oracle::load("fast.1nt"), slow = oracle::load("slow.1nt");
  const auto s = resync_search(slow, fast, 3, 5, kCaps);
  CHECK(s.found);
  CHECK(s.k == 1);
  CHECK(contains_upto(slow, fast, make_Rk({"a"}, 1), 5, kCaps).holds);

  const Transducer one_two = oracle::load("one_two.1nt"), two_one = oracle::load("two_one.1nt");
  CHECK(resync_search(one_two, one_two, 2, 5, kCaps).k == 0);

  // profile(n) = floor((n + 1) / 3) reaches 4 at n = 11.
  const auto miss = resync_search(one_two, two_one, 3, 12, kCaps);
  CHECK_FALSE(miss.found);
  REQUIRE(miss.profile.entries.size() == 12);
  for (const auto& e : miss.profile.entries) CHECK(e.value == static_cast<int>(e.length + 1) / 3);
  REQUIRE(miss.verdict.counterexample);
  CHECK(miss.verdict.counterexample->input.size() == 11);
  const auto hit = resync_search(one_two, two_one, 4, 12, kCaps);
  CHECK(hit.found);
  CHECK(hit.k == 4);
}

TEST_CASE("search coheres with the profile") {
  const std::vector<std::pair<const char*, const char*>> pairs = {
      {"slow.1nt", "fast.1nt"}, {"fast.1nt", "slow.1nt"}, {"one_two.1nt", "two_one.1nt"},
      {"id.2nt", "rev.2nt"}, {"last.1nt", "first.1nt"}, {"first.1nt", "last.1nt"}};
  for (const auto& [a, b] : pairs) {
    const Transducer t1 = oracle::load(a), t2 = oracle::load(b);
    const std::size_t len = t1.input_alphabet().size() > 1 ? 3 : 5;
    const RunCaps caps = t1.input_alphabet().size() > 1 ? kShort : kCaps;
    const auto p = traversal_profile(t1, t2, len, caps);
    int need = 0;
    bool inf = false;
    for (const auto& e : p.entries) {
      inf = inf || e.infinite;
      need = std::max(need, e.value);
    }
    for (int k = 0; k <= 3; ++k) {
      const bool holds = contains_upto(t1, t2, make_Rk(t1.input_alphabet(), k), len, caps).holds;
      CHECK_MESSAGE(holds == (!inf && k >= need), a, " ", b, " k=", k);
    }
  }
}

TEST_CASE("transitivity through composition") {
  const Transducer fast = oracle::load("fast.1nt"), slow = oracle::load("slow.1nt");
  const Resynchronizer to_first = make_to_first({"a"}), id = make_identity({"a"});
  REQUIRE(contains_upto(slow, fast, to_first, 4, kCaps).holds);
  REQUIRE(contains_upto(fast, fast, id, 4, kCaps).holds);
  REQUIRE(contains_upto(slow, slow, id, 4, kCaps).holds);
  CHECK(contains_upto(slow, fast, compose(to_first, id), 4, kCaps).holds);
  CHECK(contains_upto(slow, fast, compose(id, to_first), 4, kCaps).holds);
}

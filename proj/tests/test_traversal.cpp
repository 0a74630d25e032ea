#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "origami/error.hpp"
#include "origami/traversal.hpp"

using namespace origami;

namespace {

const std::vector<std::string> kA{"a"};

OriginGraph graph(std::size_t n, std::vector<int> origin) {
  return OriginGraph{SymWord(n, 0), SymWord(origin.size(), 0), std::move(origin)};
}

std::pair<OriginGraph, OriginGraph> random_pair(std::mt19937& rng, int max_n, int max_v) {
  std::uniform_int_distribution<int> len(1, max_n), out_len(0, max_v);
  const int n = len(rng);
  std::uniform_int_distribution<int> pos(1, n);
  std::vector<int> o1, o2;
  for (int v = out_len(rng); v > 0; --v) {
    o1.push_back(pos(rng));
    o2.push_back(pos(rng));
  }
  return {graph(static_cast<std::size_t>(n), o1), graph(static_cast<std::size_t>(n), o2)};
}

// Max over z and direction of the sources traversing z, by definition.
int max_traversal_naive(const OriginGraph& s, const OriginGraph& t) {
  const int n = static_cast<int>(s.input.size());
  int best = 0;
  for (int z = 1; z <= n; ++z) {
    int lr = 0, rl = 0;
    for (int x = 1; x <= n; ++x) {
      bool l = false, r = false;
      for (std::size_t p = 0; p < s.origin.size(); ++p) {
        if (s.origin[p] != x) continue;
        l = l || (x <= z && t.origin[p] > z);
        r = r || (x >= z && t.origin[p] < z);
      }
      lr += l;
      rl += r;
    }
    best = std::max({best, lr, rl});
  }
  return best;
}

}  // namespace

TEST_CASE("reversal against identity") {
  std::vector<int> id, rev;
  for (int i = 1; i <= 10; ++i) {
    id.push_back(i);
    rev.push_back(11 - i);
  }
  const auto r = traversal_report(graph(10, id), graph(10, rev));
  CHECK(r.max_count == 5);
  CHECK(r.argmax == 5);
  CHECK(r.left_to_right[4] == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(r.right_to_left[5] == std::vector<int>{6, 7, 8, 9, 10});
  CHECK(r.max_union == 9);
  CHECK_FALSE(greedy_label(graph(10, id), graph(10, rev), 4).ok);
  const auto g = greedy_label(graph(10, id), graph(10, rev), 5);
  REQUIRE(g.ok);
  CHECK(g.labels.right[0] == std::vector<int>{1});
  CHECK(g.labels.left[0] == std::vector<int>{10});
  CHECK(g.labels.right[4] == std::vector<int>{5});
}

TEST_CASE("one-two against two-one") {
  // a^10 -> a^15: first i letters copied once, rest twice, versus the mirror split.
  auto origins = [](int once, bool once_first) {
    std::vector<int> o;
    for (int x = 1; x <= 10; ++x) {
      const bool single = once_first ? x <= once : x > 10 - once;
      for (int c = single ? 1 : 2; c > 0; --c) o.push_back(x);
    }
    return o;
  };
  const auto r = traversal_report(graph(10, origins(5, true)), graph(10, origins(5, false)));
  CHECK(r.max_count == 3);
  CHECK(r.argmax == 4);
}

TEST_CASE("traverses by definition") {
  const OriginGraph s = graph(5, {1, 5}), t = graph(5, {4, 2});
  CHECK(traverses(s, t, 1, 1));
  CHECK(traverses(s, t, 1, 3));
  CHECK_FALSE(traverses(s, t, 1, 4));
  CHECK(traverses(s, t, 5, 3));
  CHECK_FALSE(traverses(s, t, 5, 2));
  CHECK_THROWS_AS(traverses(s, t, 0, 1), Error);
  CHECK_THROWS_AS(traversal_report(s, graph(4, {1, 1})), Error);
}

TEST_CASE("incremental greedy matches recomputation") {
  std::mt19937 rng(5);
  for (int it = 0; it < 2000; ++it) {
    auto [s, t] = random_pair(rng, 9, 12);
    for (int k = 0; k <= 4; ++k) {
      const auto a = greedy_label(s, t, k), b = greedy_label_reference(s, t, k);
      REQUIRE(a.ok == b.ok);
      if (a.ok) {
        CHECK(a.labels.right == b.labels.right);
        CHECK(a.labels.left == b.labels.left);
      }
    }
  }
}

TEST_CASE("bounded traversal gives an R_k witness") {
  std::mt19937 rng(11);
  std::vector<Resynchronizer> rk;
  for (int k = 0; k <= 3; ++k) rk.push_back(make_Rk(kA, k));
  int checked = 0;
  while (checked < 1000) {
    auto [s, t] = random_pair(rng, 8, 8);
    const int m = max_traversal_naive(s, t);
    CHECK(traversal_report(s, t).max_count == m);
    if (m > 3) continue;
    ++checked;
    for (int k = 0; k <= 3; ++k) {
      const auto g = greedy_label(s, t, k);
      if (k < m) {
        CHECK_FALSE(g.ok);
        CHECK_FALSE(pair_in_resync(rk[static_cast<std::size_t>(k)], s, t).accepted);
        continue;
      }
      REQUIRE(g.ok);
      const auto v = to_valuation(g.labels, s.input.size());
      CHECK(check_witness(rk[static_cast<std::size_t>(k)], s, t, v));
      // At most one label per direction.
      for (std::size_t i = 0; i < s.input.size(); ++i) {
        int right = 0, left = 0;
        for (std::size_t j = 0; j < v.size(); ++j) (j < static_cast<std::size_t>(k) ? right : left) += v[j][i];
        CHECK(right <= 1);
        CHECK(left <= 1);
      }
    }
  }
}

TEST_CASE("mirror symmetry") {
  std::mt19937 rng(3);
  for (int it = 0; it < 300; ++it) {
    auto [s, t] = random_pair(rng, 8, 8);
    CHECK(mirror(mirror(s)) == s);
    const auto a = traversal_report(s, t), b = traversal_report(mirror(s), mirror(t));
    CHECK(a.max_count == b.max_count);
    CHECK(a.max_union == b.max_union);
    const int n = static_cast<int>(s.input.size());
    for (int z = 1; z <= n; ++z)
      CHECK(a.left_to_right[z - 1].size() == b.right_to_left[n - z].size());
    for (int k = 0; k <= 3; ++k) CHECK(greedy_label(s, t, k).ok == greedy_label(mirror(s), mirror(t), k).ok);
  }
}

#include "search.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

namespace origami::detail {

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<State>& v) const noexcept {
    std::size_t h = v.size();
    for (State s : v) h = h * 1000003u ^ s;
    return h;
  }
};

// States from which some accepting state is reachable.
std::vector<char> live_states(const Dfa& d) {
  const std::size_t n = d.num_states();
  const auto sigma = static_cast<Letter>(d.alphabet().size());
  std::vector<std::vector<State>> rev(n);
  for (State s = 0; s < n; ++s)
    for (Letter l = 0; l < sigma; ++l) rev[d.step(s, l)].push_back(s);
  std::vector<char> live(n, 0);
  std::vector<State> stack;
  for (State s = 0; s < n; ++s)
    if (d.is_final(s)) {
      live[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const State s = stack.back();
    stack.pop_back();
    for (State p : rev[s])
      if (!live[p]) {
        live[p] = 1;
        stack.push_back(p);
      }
  }
  return live;
}

}  // namespace

std::optional<std::vector<std::vector<bool>>> least_valuation(const SymWord& u, std::size_t m,
                                                              std::vector<Component> comps) {
  auto as_key = [](const Component& c) { return std::make_tuple(c.dfa, c.x, c.y, c.has_xy); };
  std::sort(comps.begin(), comps.end(), [&](const Component& a, const Component& b) { return as_key(a) < as_key(b); });
  comps.erase(std::unique(comps.begin(), comps.end(),
                          [&](const Component& a, const Component& b) { return as_key(a) == as_key(b); }),
              comps.end());

  std::map<const Dfa*, std::vector<char>> live;
  for (const auto& c : comps)
    if (!live.contains(c.dfa)) live.emplace(c.dfa, live_states(*c.dfa));
  std::vector<const std::vector<char>*> live_of;
  for (const auto& c : comps) live_of.push_back(&live.at(c.dfa));

  const std::size_t n = u.size();
  const std::uint32_t choices = 1u << m;
  using Tuple = std::vector<State>;
  std::vector<std::vector<Tuple>> layers(n + 1);
  // edges[i][t] lists (choice, successor index in layer i + 1).
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> edges(n);

  Tuple init;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    init.push_back(comps[j].dfa->initial());
    if (!(*live_of[j])[init.back()]) return std::nullopt;
  }
  layers[0].push_back(init);

  Tuple succ(comps.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::unordered_map<Tuple, std::uint32_t, TupleHash> index;
    edges[i].resize(layers[i].size());
    const int pos = static_cast<int>(i) + 1;
    for (std::size_t t = 0; t < layers[i].size(); ++t) {
      for (std::uint32_t b = 0; b < choices; ++b) {
        bool dead = false;
        for (std::size_t j = 0; j < comps.size() && !dead; ++j) {
          const Component& c = comps[j];
          std::uint32_t bits = b;
          if (c.has_xy) {
            if (c.x == pos) bits |= 1u << m;
            if (c.y == pos) bits |= 1u << (m + 1);
          }
          succ[j] = c.dfa->step(layers[i][t][j], c.dfa->alphabet().letter(u[i], bits));
          dead = !(*live_of[j])[succ[j]];
        }
        if (dead) continue;
        auto [it, inserted] = index.emplace(succ, static_cast<std::uint32_t>(layers[i + 1].size()));
        if (inserted) layers[i + 1].push_back(succ);
        edges[i][t].emplace_back(b, it->second);
      }
    }
    if (layers[i + 1].empty()) return std::nullopt;
  }

  std::vector<std::vector<char>> good(n + 1);
  good[n].resize(layers[n].size());
  for (std::size_t t = 0; t < layers[n].size(); ++t) {
    bool all = true;
    for (std::size_t j = 0; j < comps.size(); ++j) all = all && comps[j].dfa->is_final(layers[n][t][j]);
    good[n][t] = all;
  }
  for (std::size_t i = n; i-- > 0;) {
    good[i].assign(layers[i].size(), 0);
    for (std::size_t t = 0; t < layers[i].size(); ++t)
      for (auto [b, s] : edges[i][t])
        if (good[i + 1][s]) {
          good[i][t] = 1;
          break;
        }
  }
  if (!good[0][0]) return std::nullopt;

  std::vector<std::vector<bool>> valuation(m, std::vector<bool>(n, false));
  std::uint32_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Edges are generated in increasing choice order.
    for (auto [b, s] : edges[i][t])
      if (good[i + 1][s]) {
        for (std::size_t j = 0; j < m; ++j) valuation[j][i] = (b >> j) & 1u;
        t = s;
        break;
      }
  }
  return valuation;
}

}  // namespace origami::detail

#include "origami/traversal.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "origami/error.hpp"

namespace origami {

namespace {

void check(const OriginGraph& sigma, const OriginGraph& target) {
  if (sigma.input != target.input || sigma.output != target.output)
    throw Error("origin graphs must share input and output words");
  if (sigma.origin.size() != sigma.output.size() || target.origin.size() != target.output.size())
    throw Error("origin map size mismatch");
}

}  // namespace

bool traverses(const OriginGraph& sigma, const OriginGraph& target, int x, int z) {
  check(sigma, target);
  const int n = static_cast<int>(sigma.input.size());
  if (x < 1 || x > n || z < 1 || z > n) throw Error("position out of range");
  for (std::size_t t = 0; t < sigma.origin.size(); ++t) {
    if (sigma.origin[t] != x) continue;
    if (x <= z && target.origin[t] > z) return true;
    if (x >= z && target.origin[t] < z) return true;
  }
  return false;
}

TraversalReport traversal_report(const OriginGraph& sigma, const OriginGraph& target) {
  check(sigma, target);
  const int n = static_cast<int>(sigma.input.size());
  std::vector<std::set<int>> lr(n), rl(n);
  for (std::size_t t = 0; t < sigma.origin.size(); ++t) {
    const int x = sigma.origin[t], y = target.origin[t];
    for (int z = x; z < y; ++z) lr[z - 1].insert(x);
    for (int z = x; z > y; --z) rl[z - 1].insert(x);
  }
  TraversalReport r;
  for (int z = 1; z <= n; ++z) {
    r.left_to_right.emplace_back(lr[z - 1].begin(), lr[z - 1].end());
    r.right_to_left.emplace_back(rl[z - 1].begin(), rl[z - 1].end());
    const int c = static_cast<int>(std::max(lr[z - 1].size(), rl[z - 1].size()));
    if (c > r.max_count) {
      r.max_count = c;
      r.argmax = z;
    }
    std::set<int> both = lr[z - 1];
    both.insert(rl[z - 1].begin(), rl[z - 1].end());
    r.max_union = std::max(r.max_union, static_cast<int>(both.size()));
  }
  return r;
}

std::string format_report(const TraversalReport& r) {
  std::ostringstream s;
  for (std::size_t z = 0; z < r.left_to_right.size(); ++z) {
    s << z + 1 << ": " << r.left_to_right[z].size() << ' ' << r.right_to_left[z].size() << " [";
    bool first = true;
    for (int x : r.left_to_right[z]) {
      s << (first ? "" : " ") << x << '>';
      first = false;
    }
    for (int x : r.right_to_left[z]) {
      s << (first ? "" : " ") << '<' << x;
      first = false;
    }
    s << "]\n";
  }
  s << "max: " << r.max_count << " at " << r.argmax << "\n";
  return s.str();
}

namespace {

// Farthest redirection target of each source in one direction (0 if none).
std::vector<int> reach(const OriginGraph& sigma, const OriginGraph& target, bool rightward) {
  std::vector<int> far(sigma.input.size() + 1, 0);
  for (std::size_t t = 0; t < sigma.origin.size(); ++t) {
    const int x = sigma.origin[t], y = target.origin[t];
    if (rightward && y > x) far[x] = std::max(far[x], y);
    if (!rightward && y < x) far[x] = far[x] ? std::min(far[x], y) : y;
  }
  return far;
}

// One pass of the incremental algorithm; `rightward` selects the direction.
bool pass(const OriginGraph& sigma, const OriginGraph& target, int k, bool rightward,
          std::vector<std::vector<int>>& labels, int& failed_at) {
  const int n = static_cast<int>(sigma.input.size());
  const std::vector<int> far = reach(sigma, target, rightward);
  labels.assign(static_cast<std::size_t>(k), {});
  // Index i is busy while the positions scanned lie strictly before (after)
  // the farthest target of its members.
  std::vector<int> busy(static_cast<std::size_t>(k), rightward ? 0 : n + 1);
  for (int step = 0; step < n; ++step) {
    const int x = rightward ? step + 1 : n - step;
    if (!far[x]) continue;
    int chosen = -1;
    for (int i = 0; i < k && chosen < 0; ++i)
      if (rightward ? busy[i] <= x : busy[i] >= x) chosen = i;
    if (chosen < 0) {
      failed_at = x;
      return false;
    }
    labels[chosen].push_back(x);
    busy[chosen] = rightward ? std::max(busy[chosen], far[x]) : std::min(busy[chosen], far[x]);
  }
  if (!rightward)
    for (auto& l : labels) std::sort(l.begin(), l.end());
  return true;
}

}  // namespace

LabelResult greedy_label(const OriginGraph& sigma, const OriginGraph& target, int k) {
  check(sigma, target);
  if (k < 0) throw Error("k must be non-negative");
  LabelResult r;
  r.ok = pass(sigma, target, k, true, r.labels.right, r.failed_at) &&
         pass(sigma, target, k, false, r.labels.left, r.failed_at);
  return r;
}

LabelResult greedy_label_reference(const OriginGraph& sigma, const OriginGraph& target, int k) {
  check(sigma, target);
  const int n = static_cast<int>(sigma.input.size());
  LabelResult r;
  r.labels.right.assign(static_cast<std::size_t>(k), {});
  r.labels.left.assign(static_cast<std::size_t>(k), {});
  for (int dir = 0; dir < 2; ++dir) {
    const bool rightward = dir == 0;
    auto& labels = rightward ? r.labels.right : r.labels.left;
    for (int step = 0; step < n; ++step) {
      const int x = rightward ? step + 1 : n - step;
      bool redirected = false;
      for (std::size_t t = 0; t < sigma.origin.size(); ++t)
        if (sigma.origin[t] == x && (rightward ? target.origin[t] > x : target.origin[t] < x))
          redirected = true;
      if (!redirected) continue;
      int chosen = -1;
      for (int i = 0; i < k && chosen < 0; ++i) {
        bool free = true;
        for (int member : labels[i]) free = free && !traverses(sigma, target, member, x);
        if (free) chosen = i;
      }
      if (chosen < 0) {
        r.failed_at = x;
        return r;
      }
      labels[chosen].push_back(x);
    }
    if (!rightward)
      for (auto& l : labels) std::sort(l.begin(), l.end());
  }
  r.ok = true;
  return r;
}

ParamValuation to_valuation(const LabelAssignment& labels, std::size_t input_len) {
  ParamValuation v;
  for (const auto* side : {&labels.right, &labels.left})
    for (const auto& set : *side) {
      std::vector<bool> bits(input_len, false);
      for (int x : set) bits.at(static_cast<std::size_t>(x - 1)) = true;
      v.push_back(std::move(bits));
    }
  return v;
}

OriginGraph mirror(const OriginGraph& g) {
  OriginGraph m;
  m.input.assign(g.input.rbegin(), g.input.rend());
  m.output.assign(g.output.rbegin(), g.output.rend());
  const int n = static_cast<int>(g.input.size());
  for (auto it = g.origin.rbegin(); it != g.origin.rend(); ++it) m.origin.push_back(n + 1 - *it);
  return m;
}

}  // namespace origami

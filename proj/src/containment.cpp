#include "origami/containment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "origami/error.hpp"
#include "origami/traversal.hpp"
#include "parallel.hpp"

namespace origami {

namespace {

SymWord word_at(std::size_t sigma, std::size_t n, std::uint64_t index) {
  SymWord w(n, 0);
  for (std::size_t i = n; i-- > 0; index /= sigma) w[i] = static_cast<Symbol>(index % sigma);
  return w;
}

std::uint64_t word_count(std::size_t sigma, std::size_t n) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / std::max<std::size_t>(sigma, 1))
      throw Error("sweep too large");
    c *= sigma;
  }
  return c;
}

void check_alphabets(const Transducer& t1, const Transducer& t2) {
  if (t1.input_alphabet() != t2.input_alphabet() || t1.output_alphabet() != t2.output_alphabet())
    throw AlphabetMismatch("transducers must share input and output alphabets");
}

// Calls f(to, new_pos, origin, output) for every move of a one-way
// transducer from state s after consuming i letters.
template <typename F>
void one_way_moves(const Transducer& t, const SymWord& u, std::uint32_t s, int i, F f) {
  const int n = static_cast<int>(u.size());
  for (std::uint32_t ti : t.outgoing(s, kEpsilon)) {
    const Transition& tr = t.transitions()[ti];
    f(tr.to, i, std::min(i + 1, n), tr.output);
  }
  if (i < n)
    for (std::uint32_t ti : t.outgoing(s, static_cast<int>(u[i]))) {
      const Transition& tr = t.transitions()[ti];
      f(tr.to, i + 1, i + 1, tr.output);
    }
}

// Depth-first search for a run of a one-way transducer on g.input producing
// g.output, where output j may only get an origin x with allowed(x, orig_g(j)).
class PartnerSearch {
 public:
  PartnerSearch(const Transducer& t, const OriginGraph& g, std::vector<std::vector<char>> allowed)
      : t_(t), g_(g), allowed_(std::move(allowed)), n_(static_cast<int>(g.input.size())) {}

  std::optional<OriginGraph> run() {
    for (std::uint32_t s = 0; s < t_.num_states(); ++s)
      if (t_.is_initial(s) && dfs(s, 0, 0)) return OriginGraph{g_.input, g_.output, origin_};
    return std::nullopt;
  }

 private:
  bool dfs(std::uint32_t s, int i, std::size_t j) {
    if (t_.is_final(s) && i == n_ && j == g_.output.size()) return true;
    const std::uint64_t key = (static_cast<std::uint64_t>(s) * (n_ + 1) + i) * (g_.output.size() + 1) + j;
    if (!seen_.insert(key).second) return false;
    bool found = false;
    one_way_moves(t_, g_.input, s, i, [&](std::uint32_t to, int pos, int origin, const SymWord& out) {
      if (found || j + out.size() > g_.output.size()) return;
      for (std::size_t k = 0; k < out.size(); ++k)
        if (out[k] != g_.output[j + k] || !allowed_[origin][g_.origin[j + k]]) return;
      origin_.insert(origin_.end(), out.size(), origin);
      if (dfs(to, pos, j + out.size())) {
        found = true;
        return;
      }
      origin_.resize(j);
    });
    return found;
  }

  const Transducer& t_;
  const OriginGraph& g_;
  std::vector<std::vector<char>> allowed_;
  int n_;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<int> origin_;
};

std::vector<std::vector<char>> all_allowed(int n) {
  return std::vector<std::vector<char>>(n + 1, std::vector<char>(n + 1, 1));
}

RunCaps partner_caps(const RunCaps& caps, const OriginGraph& g) {
  RunCaps c = caps;
  c.max_output = g.output.size();
  return c;
}

struct PartnerResult {
  std::optional<OriginGraph> partner;
  bool pruned = false;
};

PartnerResult find_partner(const Transducer& t2, const Resynchronizer& r, const OriginGraph& g,
                           const RunCaps& caps) {
  const int n = static_cast<int>(g.input.size());
  if (t2.kind() == TransducerKind::one_way && r.num_params() == 0) {
    std::vector<std::vector<char>> allowed(n + 1, std::vector<char>(n + 1, 0));
    for (int x = 1; x <= n; ++x)
      for (int y = 1; y <= n; ++y) allowed[x][y] = gamma_holds(r, g.input, {}, x, y);
    return {PartnerSearch(t2, g, std::move(allowed)).run(), false};
  }
  const GraphSet candidates = run_origin_graphs(t2, g.input, g.output, partner_caps(caps, g));
  for (const auto& c : candidates.graphs)
    if (pair_in_resync(r, c, g).accepted) return {c, candidates.pruned};
  return {std::nullopt, candidates.pruned};
}

std::optional<OriginGraph> any_partner(const Transducer& t2, const OriginGraph& g, const RunCaps& caps) {
  if (t2.kind() == TransducerKind::one_way)
    return PartnerSearch(t2, g, all_allowed(static_cast<int>(g.input.size()))).run();
  const GraphSet c = run_origin_graphs(t2, g.input, g.output, partner_caps(caps, g));
  if (c.graphs.empty()) return std::nullopt;
  return c.graphs.front();
}

}  // namespace

Verdict contains_upto(const Transducer& t1, const Transducer& t2, const Resynchronizer& r,
                      std::size_t max_input_len, const RunCaps& caps, std::vector<GraphPair>* used) {
  check_alphabets(t1, t2);
  if (r.base != t1.input_alphabet()) throw AlphabetMismatch("resynchronizer alphabet differs from input alphabet");
  Verdict v;
  v.max_input_len = max_input_len;
  v.caps = caps;
  const std::size_t sigma = t1.input_alphabet().size();
  std::atomic<std::size_t> checked{0};
  std::atomic<bool> pruned{false};
  std::mutex lock;
  for (std::size_t n = 1; n <= max_input_len && v.holds; ++n) {
    std::atomic<std::uint64_t> first_fail{std::numeric_limits<std::uint64_t>::max()};
    detail::parallel_for(word_count(sigma, n), [&](std::uint64_t index) {
      if (index > first_fail) return;
      const SymWord u = word_at(sigma, n, index);
      const GraphSet graphs = run_origin_graphs(t1, u, caps);
      if (graphs.pruned) pruned = true;
      for (const auto& g : graphs.graphs) {
        ++checked;
        const PartnerResult p = find_partner(t2, r, g, caps);
        if (p.pruned) pruned = true;
        std::lock_guard guard(lock);
        if (p.partner) {
          if (used) used->emplace_back(*p.partner, g);
          continue;
        }
        if (index < first_fail) {
          first_fail = index;
          v.holds = false;
          v.counterexample = g;
        }
        return;
      }
    });
  }
  if (v.counterexample) v.nearest = any_partner(t2, *v.counterexample, caps);
  if (used) std::sort(used->begin(), used->end());
  v.graphs_checked = checked;
  v.pruned = pruned;
  return v;
}

namespace {

// Branch and bound over runs of a one-way transducer producing g.output:
// is there a run whose directional traversal count against g is <= bound?
// Origins of a one-way run are non-decreasing, so only the latest source
// can still extend its reach; counts for positions left of it are final
// on the left-to-right side.
class BoundedPartner {
 public:
  BoundedPartner(const Transducer& t, const OriginGraph& g, int bound)
      : t_(t), g_(g), bound_(bound), n_(static_cast<int>(g.input.size())),
        lr_(n_ + 2, 0), rl_(n_ + 2, 0) {}

  std::optional<OriginGraph> run() {
    for (std::uint32_t s = 0; s < t_.num_states(); ++s)
      if (t_.is_initial(s) && dfs(s, 0, 0)) return OriginGraph{g_.input, g_.output, origin_};
    return std::nullopt;
  }

 private:
  std::string key(std::uint32_t s, int i, std::size_t j) const {
    std::string k;
    auto put = [&](std::uint32_t v) {
      k.push_back(static_cast<char>(v & 0xff));
      k.push_back(static_cast<char>(v >> 8));
    };
    put(s);
    put(static_cast<std::uint32_t>(i));
    put(static_cast<std::uint32_t>(j));
    put(static_cast<std::uint32_t>(x_));
    put(static_cast<std::uint32_t>(reach_r_));
    put(static_cast<std::uint32_t>(reach_l_));
    k.append(lr_.begin() + std::max(x_, 1), lr_.end());
    k.append(rl_.begin(), rl_.end());
    return k;
  }

  // Adds an output with origin x redirected to y; false when over the bound.
  bool add(int x, int y) {
    if (x != x_) {
      x_ = x;
      reach_r_ = reach_l_ = x;
    }
    for (; reach_r_ < y; ++reach_r_)
      if (++lr_[reach_r_] > bound_) return false;
    for (; reach_l_ > y; --reach_l_)
      if (++rl_[reach_l_] > bound_) return false;
    return true;
  }

  bool dfs(std::uint32_t s, int i, std::size_t j) {
    if (t_.is_final(s) && i == n_ && j == g_.output.size()) return true;
    if (!seen_.insert(key(s, i, j)).second) return false;
    bool found = false;
    one_way_moves(t_, g_.input, s, i, [&](std::uint32_t to, int pos, int origin, const SymWord& out) {
      if (found || j + out.size() > g_.output.size()) return;
      if (!std::equal(out.begin(), out.end(), g_.output.begin() + static_cast<std::ptrdiff_t>(j))) return;
      const auto saved_lr = lr_, saved_rl = rl_;
      const int sx = x_, sr = reach_r_, sl = reach_l_;
      bool ok = true;
      for (std::size_t k = 0; k < out.size() && ok; ++k) ok = add(origin, g_.origin[j + k]);
      if (ok) {
        origin_.insert(origin_.end(), out.size(), origin);
        if (dfs(to, pos, j + out.size())) {
          found = true;
          return;
        }
        origin_.resize(j);
      }
      lr_ = saved_lr;
      rl_ = saved_rl;
      x_ = sx;
      reach_r_ = sr;
      reach_l_ = sl;
    });
    return found;
  }

  const Transducer& t_;
  const OriginGraph& g_;
  int bound_;
  int n_;
  std::vector<char> lr_, rl_;  // counts per position z, index z
  int x_ = 0, reach_r_ = 0, reach_l_ = 0;
  std::unordered_set<std::string> seen_;
  std::vector<int> origin_;
};

// Partner with traversal count <= bound, if any.
std::optional<OriginGraph> partner_within(const Transducer& t2, const OriginGraph& g, int bound,
                                          const RunCaps& caps, bool& pruned) {
  if (t2.kind() == TransducerKind::one_way) return BoundedPartner(t2, g, bound).run();
  const GraphSet c = run_origin_graphs(t2, g.input, g.output, partner_caps(caps, g));
  pruned = pruned || c.pruned;
  for (const auto& p : c.graphs)
    if (traversal_report(p, g).max_count <= bound) return p;
  return std::nullopt;
}

// Least count over partners, clamped below by `from`; nullopt when there is
// no partner at all.
std::optional<int> least_from(const Transducer& t2, const OriginGraph& g, int from, const RunCaps& caps,
                              OriginGraph* partner, bool& pruned) {
  const int n = static_cast<int>(g.input.size());
  if (t2.kind() == TransducerKind::two_way) {
    const GraphSet c = run_origin_graphs(t2, g.input, g.output, partner_caps(caps, g));
    pruned = pruned || c.pruned;
    std::optional<int> best;
    for (const auto& p : c.graphs) {
      const int v = traversal_report(p, g).max_count;
      if (!best || v < *best) {
        best = v;
        if (partner) *partner = p;
      }
    }
    return best;
  }
  auto any = BoundedPartner(t2, g, n).run();
  if (!any) return std::nullopt;
  int lo = from, hi = std::max(traversal_report(*any, g).max_count, from);
  OriginGraph best = *any;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (auto p = BoundedPartner(t2, g, mid).run()) {
      best = *p;
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (partner) *partner = best;
  return lo;
}

}  // namespace

std::optional<int> best_partner(const Transducer& t2, const OriginGraph& g, const RunCaps& caps,
                                OriginGraph* partner) {
  bool pruned = false;
  return least_from(t2, g, 0, caps, partner, pruned);
}

TraversalProfile traversal_profile(const Transducer& t1, const Transducer& t2, std::size_t max_input_len,
                                   const RunCaps& caps) {
  check_alphabets(t1, t2);
  TraversalProfile prof;
  const std::size_t sigma = t1.input_alphabet().size();
  std::atomic<bool> pruned{false};
  for (std::size_t n = 1; n <= max_input_len; ++n) {
    ProfileEntry e;
    e.length = n;
    std::atomic<std::uint64_t> witness_index{std::numeric_limits<std::uint64_t>::max()};
    std::atomic<int> current{0};
    std::atomic<bool> infinite{false};
    std::mutex lock;
    detail::parallel_for(word_count(sigma, n), [&](std::uint64_t index) {
      if (infinite && index > witness_index) return;
      const SymWord u = word_at(sigma, n, index);
      const GraphSet graphs = run_origin_graphs(t1, u, caps);
      bool local_pruned = graphs.pruned;
      for (const auto& g : graphs.graphs) {
        const int cur = current;
        // Values below the running maximum cannot change the entry.
        if (cur > 0 && partner_within(t2, g, cur - 1, caps, local_pruned)) continue;
        OriginGraph partner;
        const auto v = least_from(t2, g, cur, caps, &partner, local_pruned);
        std::lock_guard guard(lock);
        if (!v) {
          if (!infinite || index < witness_index) {
            infinite = true;
            witness_index = index;
            e.witness = g;
            e.partner.reset();
          }
          break;
        }
        if (infinite || *v < e.value) continue;
        if (!e.witness || *v > e.value || index < witness_index) {
          e.value = *v;
          witness_index = index;
          e.witness = g;
          e.partner = partner;
          current = std::max(current.load(), *v);
        }
      }
      if (local_pruned) pruned = true;
    });
    e.infinite = infinite;
    if (e.infinite) e.value = 0;
    prof.entries.push_back(std::move(e));
  }
  prof.pruned = pruned;
  std::size_t run = 0;
  for (std::size_t i = 0; i < prof.entries.size(); ++i) {
    const auto& a = prof.entries[i];
    const bool up = i > 0 && !prof.entries[i - 1].infinite &&
                    (a.infinite || a.value > prof.entries[i - 1].value);
    run = up ? run + 1 : 1;
    prof.increasing_run = std::max(prof.increasing_run, run);
  }
  prof.growth_evidence = prof.increasing_run >= kGrowthRun;
  return prof;
}

SearchResult resync_search(const Transducer& t1, const Transducer& t2, int k_max, std::size_t max_input_len,
                           const RunCaps& caps) {
  if (k_max < 0) throw Error("k_max must be non-negative");
  SearchResult res;
  for (int k = 0; k <= k_max; ++k) {
    res.verdict = contains_upto(t1, t2, make_Rk(t1.input_alphabet(), k), max_input_len, caps);
    if (res.verdict.holds) {
      res.found = true;
      res.k = k;
      return res;
    }
  }
  res.profile = traversal_profile(t1, t2, max_input_len, caps);
  return res;
}

std::string format_profile(const TraversalProfile& p) {
  std::ostringstream s;
  for (const auto& e : p.entries) {
    s << e.length << ": ";
    if (e.infinite)
      s << "inf";
    else
      s << e.value;
    s << '\n';
  }
  if (p.growth_evidence) s << "unbounded-growth evidence (heuristic)\n";
  if (p.pruned) s << "approximate: runs cut by caps\n";
  return s.str();
}

}  // namespace origami

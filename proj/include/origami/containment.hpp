#pragma once
// Containment of one transducer in a resynchronization of another, checked
// on all inputs up to a length bound, and the traversal profile.

#include <optional>
#include <string>
#include <vector>

#include "origami/resync.hpp"
#include "origami/transducer.hpp"

namespace origami {

struct Verdict {
  bool holds = true;  // holds on the sweep
  // First T1 graph (sweep order) without a resynchronized T2 partner.
  std::optional<OriginGraph> counterexample;
  // Some T2 graph with the same input and output, when one exists.
  std::optional<OriginGraph> nearest;
  std::size_t max_input_len = 0;
  RunCaps caps;
  bool pruned = false;  // T1 runs were cut by the caps
  std::size_t graphs_checked = 0;
};

using GraphPair = std::pair<OriginGraph, OriginGraph>;  // (T2 graph, T1 graph)

/// T1 graphs with input length 1..max_input_len, each matched against T2.
/// When `used` is given, every accepted (partner, graph) pair is appended.
Verdict contains_upto(const Transducer& t1, const Transducer& t2, const Resynchronizer& r,
                      std::size_t max_input_len, const RunCaps& caps,
                      std::vector<GraphPair>* used = nullptr);

struct ProfileEntry {
  std::size_t length = 0;
  int value = 0;          // meaningless when infinite
  bool infinite = false;  // some T1 graph has no same-(u,v) partner
  std::optional<OriginGraph> witness;  // T1 graph attaining the value
  std::optional<OriginGraph> partner;  // best T2 partner for it
};

struct TraversalProfile {
  std::vector<ProfileEntry> entries;  // lengths 1..max_input_len
  bool pruned = false;
  // Longest run of consecutive lengths over which the value strictly
  // increases; four or more counts as growth evidence.
  std::size_t increasing_run = 0;
  bool growth_evidence = false;
};

inline constexpr std::size_t kGrowthRun = 4;

/// profile(n) = max over T1 graphs on inputs of length n of the least
/// directional traversal count over T2 partners with the same input/output.
TraversalProfile traversal_profile(const Transducer& t1, const Transducer& t2,
                                   std::size_t max_input_len, const RunCaps& caps);

/// Least traversal count between `g` and a T2 partner; nullopt when there is
/// no partner. `partner` receives an optimal one.
std::optional<int> best_partner(const Transducer& t2, const OriginGraph& g, const RunCaps& caps,
                                OriginGraph* partner = nullptr);

struct SearchResult {
  bool found = false;
  int k = -1;
  Verdict verdict;           // for the k found, else for k_max
  TraversalProfile profile;  // filled when not found
};

/// Least k <= k_max such that T1 is contained in R_k(T2) on the sweep.
SearchResult resync_search(const Transducer& t1, const Transducer& t2, int k_max,
                           std::size_t max_input_len, const RunCaps& caps);

std::string format_profile(const TraversalProfile& p);

}  // namespace origami

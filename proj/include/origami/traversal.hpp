#pragma once
// Traversal of input positions by origin redirections between two origin
// graphs over the same words, and the greedy labelling that witnesses
// membership in R_k.

#include <optional>
#include <string>
#include <vector>

#include "origami/resync.hpp"
#include "origami/transducer.hpp"

namespace origami {

/// Does source x traverse z? Some output t with orig(t) = x has
/// x <= z < orig'(t) or orig'(t) < z <= x. Positions are 1-based.
bool traverses(const OriginGraph& sigma, const OriginGraph& target, int x, int z);

struct TraversalReport {
  // Indexed by z - 1: sorted distinct sources traversing z in each direction.
  std::vector<std::vector<int>> left_to_right;
  std::vector<std::vector<int>> right_to_left;
  int max_count = 0;  // max over z and direction of the number of sources
  int argmax = 0;     // a position z attaining max_count (0 when max is 0)
  int max_union = 0;  // max over z of |left_to_right(z) u right_to_left(z)|
};

TraversalReport traversal_report(const OriginGraph& sigma, const OriginGraph& target);
std::string format_report(const TraversalReport& r);

struct LabelAssignment {
  std::vector<std::vector<int>> right;  // right[i]: positions labelled Right_i
  std::vector<std::vector<int>> left;
};

struct LabelResult {
  bool ok = false;
  LabelAssignment labels;
  int failed_at = 0;  // position whose free index set was empty
};

/// Left-to-right pass over positions redirected to the right, giving each
/// the least index whose members do not traverse it; symmetric pass for the
/// left. Fails when no index is free.
LabelResult greedy_label(const OriginGraph& sigma, const OriginGraph& target, int k);
/// Same algorithm with free indexes recomputed from scratch at each step.
LabelResult greedy_label_reference(const OriginGraph& sigma, const OriginGraph& target, int k);

/// Parameter valuation for make_Rk(k): Right_0..Right_{k-1}, Left_0..Left_{k-1}.
ParamValuation to_valuation(const LabelAssignment& labels, std::size_t input_len);

/// Reverses input and output and mirrors origins.
OriginGraph mirror(const OriginGraph& g);

}  // namespace origami

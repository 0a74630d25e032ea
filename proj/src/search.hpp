#pragma once
// Search for parameter valuations satisfying several gamma-like automata at
// once, one automaton per (x, y) constraint.

#include <optional>
#include <vector>

#include "origami/automata.hpp"
#include "origami/transducer.hpp"

namespace origami::detail {

/// An automaton over base x B^m (has_xy false) or base x B^(m+2) with the
/// last two tracks fixed to the singletons x and y (1-based positions).
struct Component {
  const Dfa* dfa;
  int x;
  int y;
  bool has_xy;
};

/// Least valuation (position by position, then by parameter bits) accepted
/// by every component, or nullopt.
std::optional<std::vector<std::vector<bool>>> least_valuation(const SymWord& u, std::size_t m,
                                                              std::vector<Component> comps);

}  // namespace origami::detail

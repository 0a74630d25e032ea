#pragma once
// Regular resynchronizers: a formula gamma(I_1..I_m, x, y) over the input word
// allowing an output whose origin is x to be moved to y.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "origami/automata.hpp"
#include "origami/mso.hpp"
#include "origami/transducer.hpp"

namespace origami {

struct Resynchronizer {
  std::vector<std::string> base;    // input alphabet
  std::vector<std::string> params;  // input parameter names
  Dfa gamma;                        // over base with tracks (params..., x, y)
  std::string description;          // formula text when built from a formula

  std::size_t num_params() const { return params.size(); }
};

/// Builds gamma from a formula whose free variables are among params, x, y.
Resynchronizer make_resync(const std::vector<std::string>& base,
                           const std::vector<std::string>& params, const mso::Formula& gamma);
Resynchronizer make_resync(const std::vector<std::string>& base,
                           const std::vector<std::string>& params, std::string_view gamma);
/// Wraps an automaton whose tracks must be (params..., x, y).
Resynchronizer make_resync(Dfa gamma);

Resynchronizer make_identity(const std::vector<std::string>& base);
Resynchronizer make_universal(const std::vector<std::string>& base);
Resynchronizer make_pm1(const std::vector<std::string>& base);
/// y <= x <= y + k: origins move left by at most k.
Resynchronizer make_shift(const std::vector<std::string>& base, int k);
/// (I = {x}) | x = y
Resynchronizer make_param_example(const std::vector<std::string>& base);
/// Universal resynchronizer for k-traversal, parameters Right_0..Right_{k-1},
/// Left_0..Left_{k-1}.
Resynchronizer make_Rk(const std::vector<std::string>& base, int k);
mso::Formula rk_formula(int k);
/// x = first
Resynchronizer make_to_first(const std::vector<std::string>& base);
/// x = first & y = last
Resynchronizer make_first_to_last(const std::vector<std::string>& base);
/// Moves the first letter of an a-block to its last letter; b stays put.
Resynchronizer make_block(const std::vector<std::string>& base);
mso::Formula block_formula();

/// Parameter valuation: params[j][i] is the bit of parameter j at input
/// position i (0-based).
using ParamValuation = std::vector<std::vector<bool>>;

struct MembershipResult {
  bool accepted = false;
  ParamValuation witness;
};

/// Is (sigma, target) in the relation, i.e. is there a valuation under which
/// every output position satisfies gamma(I, orig(z), orig'(z))? The witness
/// is the least valuation, compared position by position.
MembershipResult pair_in_resync(const Resynchronizer& r, const OriginGraph& sigma,
                                const OriginGraph& target);

/// Checks gamma at every output position under a fixed valuation.
bool check_witness(const Resynchronizer& r, const OriginGraph& sigma, const OriginGraph& target,
                   const ParamValuation& params);

/// Does gamma accept (u, I, x, y)? Positions are 1-based.
bool gamma_holds(const Resynchronizer& r, const SymWord& u, const ParamValuation& params, int x,
                 int y);

struct BoundednessResult {
  bool bounded = true;
  Ambiguity ambiguity = Ambiguity::finite;
  // Pumping witness when unbounded: states of the source-guessing automaton
  // and a word over the base alphabet with tracks (params..., y).
  std::string pattern;
  std::size_t automaton_states = 0;
};

/// Decides boundedness through the ambiguity of the automaton that guesses
/// the source x while reading (u, I, y).
BoundednessResult is_bounded(const Resynchronizer& r);
/// The source-guessing automaton itself (trimmed), over tracks (params..., y).
Nfa source_automaton(const Resynchronizer& r);

struct BoundViolation {
  SymWord input;
  ParamValuation params;
  int target = 0;
  std::vector<int> sources;
};

/// Searches all inputs up to `max_len`, valuations and targets for more
/// than k sources. nullopt when the bound holds on the sweep.
std::optional<BoundViolation> bounded_by(const Resynchronizer& r, int k, std::size_t max_len);

/// gamma(I1, I2, x, y) = exists z. gamma1(I1, z, y) & gamma2(I2, x, z):
/// second applied first, then first.
Resynchronizer compose(const Resynchronizer& first, const Resynchronizer& second);

/// Converts a valuation to/from text, one line per parameter ("I: 0 1 0").
std::string format_valuation(const Resynchronizer& r, const ParamValuation& v);

// ------------------------------------------------------------- extended

struct ExtendedResynchronizer {
  std::vector<std::string> base;
  std::vector<std::string> output;
  std::vector<std::string> params;
  std::vector<std::string> out_params;
  Dfa alpha;                 // over base with tracks params
  Dfa beta;                  // over output with tracks out_params
  std::vector<Dfa> gamma;    // per output type, tracks (params..., x, y)
  std::vector<Dfa> delta;    // per pair of output types, tracks (params..., x, y)

  std::size_t num_types() const { return output.size() << out_params.size(); }
  /// Output type index of symbol c with out-parameter bits.
  std::size_t type_of(Symbol c, std::uint32_t bits) const { return (c << out_params.size()) | bits; }
};

/// Formulas by type; `gamma_default` / `delta_default` fill missing types.
/// Types are written like `c` or `c[1 0]`.
struct ExtendedSpec {
  std::vector<std::string> base, output, params, out_params;
  std::string alpha = "true", beta = "true";
  std::string gamma_default = "x = y", delta_default = "true";
  std::vector<std::pair<std::string, std::string>> gamma;                   // type, formula
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>> delta;
};

ExtendedResynchronizer make_extended(const ExtendedSpec& spec);

struct ExtendedMembership {
  bool accepted = false;
  ParamValuation input_params;
  ParamValuation output_params;
};

ExtendedMembership extended_pair_in_resync(const ExtendedResynchronizer& r,
                                           const OriginGraph& sigma, const OriginGraph& target);

/// Union over output types of gamma(type).
Resynchronizer simplify_extended(const ExtendedResynchronizer& r);

// ----------------------------------------------------------------- files

/// Resynchronizer file:
///   alphabet: a b        (optional when `default_base` is given)
///   params: I
///   gamma: (I = {x}) | x = y
/// or `gamma-automaton: path` relative to `base_dir`.
Resynchronizer parse_resync(std::string_view text, const std::vector<std::string>& default_base = {},
                            const std::string& base_dir = ".");
/// Extended files add output-alphabet:, out-params:, alpha:, beta:,
/// gamma(type):, delta(type, type): lines.
ExtendedResynchronizer parse_extended(std::string_view text,
                                      const std::vector<std::string>& default_base = {},
                                      const std::vector<std::string>& default_output = {});
bool is_extended_text(std::string_view text);

}  // namespace origami

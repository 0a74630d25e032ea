#pragma once
// Rational resynchronizers for one-way transducers: languages of pairs of
// interleaved words, read letter by letter.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "origami/automata.hpp"
#include "origami/containment.hpp"
#include "origami/transducer.hpp"

namespace origami {

/// Word over input letters 0..|in|-1 followed by output letters |in|..
using Interleaved = std::vector<Symbol>;

/// Input letter u_i followed by the outputs whose origin is i. Origins must
/// be non-decreasing in output order.
Interleaved interleave(const OriginGraph& g, std::size_t input_size);
/// Inverse of interleave; an output letter before any input letter is rejected.
OriginGraph deinterleave(const Interleaved& w, std::size_t input_size);

std::string format_interleaved(const std::vector<std::string>& in, const std::vector<std::string>& out,
                               const Interleaved& w, std::string_view sep = "");
Interleaved parse_interleaved(const std::vector<std::string>& in, const std::vector<std::string>& out,
                              std::string_view text);

struct RationalResync {
  std::vector<std::string> input, output;
  // Letter x/y is x * L + y with L = |input| + |output|, top first.
  std::optional<Dfa> acceptor;
  int shift = -1;  // bounded-delay form when no acceptor is given
  std::string description;

  std::size_t letters() const { return input.size() + output.size(); }
  /// Names "x/y" of the paired letters.
  std::vector<std::string> pair_names() const;
};

/// Regular expression over paired letters `x/y`: juxtaposition, infix `+`
/// for union, postfix `*` and `^+`, parentheses, `eps`.
RationalResync make_rational(const std::vector<std::string>& in, const std::vector<std::string>& out,
                             std::string_view regex);
/// Diagonal letters only.
RationalResync make_rational_identity(const std::vector<std::string>& in, const std::vector<std::string>& out);
/// Equal projections, each output emitted at input counts at most k apart.
RationalResync make_rational_shift(const std::vector<std::string>& in, const std::vector<std::string>& out,
                                   int k);
/// Input {a, b}, output {c, d}: an a-block may move its c from the first to
/// the last a.
RationalResync make_rational_block();
std::string block_regex();

/// Is (interleave(sigma), interleave(target)) accepted?
bool rational_pair_accepts(const RationalResync& r, const OriginGraph& sigma, const OriginGraph& target);
bool rational_accepts(const RationalResync& r, const Interleaved& top, const Interleaved& bottom);

/// Some accepted pair of length <= max_len whose components differ in a
/// projection, if any.
std::optional<std::pair<Interleaved, Interleaved>> projection_violation(const RationalResync& r,
                                                                        std::size_t max_len);

Verdict contains_upto_rational(const Transducer& t1, const Transducer& t2, const RationalResync& r,
                               std::size_t max_input_len, const RunCaps& caps);

/// rational file: `input: a b`, `output: c d`, then `regex: ...` or `shift: k`.
RationalResync parse_rational(std::string_view text);

}  // namespace origami

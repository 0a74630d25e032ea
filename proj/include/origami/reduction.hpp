#pragma once
// Turing machines, domino tiles and the transducers built from them.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "origami/transducer.hpp"

namespace origami {

struct TuringMachine {
  struct Rule {
    std::uint32_t from = 0;
    std::uint32_t read = 0;
    std::uint32_t to = 0;
    std::uint32_t write = 0;
    Direction dir = Direction::right;
  };

  std::vector<std::string> states;
  std::vector<std::string> alphabet;  // alphabet[0] is the blank
  std::uint32_t initial = 0;
  std::uint32_t final = 0;
  std::vector<Rule> rules;  // in file order, deterministic

  const Rule* rule(std::uint32_t state, std::uint32_t letter) const;
  /// A, then Q, then #.
  std::vector<std::string> gamma() const;
  Symbol state_symbol(std::uint32_t q) const { return static_cast<Symbol>(alphabet.size() + q); }
  Symbol hash_symbol() const { return static_cast<Symbol>(alphabet.size() + states.size()); }
};

/// states: q0 q1 / alphabet: B a (blank first) / initial: q0 / final: q1 /
/// rules `q0,B -> q1,a,R`.
TuringMachine parse_machine(std::string_view text);
std::string format_machine(const TuringMachine& m);

enum class TileKind { copy, right, right_expansion, left, left_expansion };
const char* to_string(TileKind k);

struct Tile {
  std::string name;
  SymWord top, bottom;  // over gamma
  TileKind kind = TileKind::copy;
};

struct TileSet {
  std::vector<std::string> gamma;
  std::vector<Tile> tiles;

  std::vector<std::string> names() const;
};

/// Copy tiles for A and #, right tiles, expansion tiles per state, left
/// tiles per left move and letter, left-expansion tiles; named i1, i2, ...
TileSet build_tiles(const TuringMachine& m);
/// Two aligned rows, top words above bottom words.
std::string format_tiles(const TileSet& t);

enum class HistoryStatus { halted, still_running, cell_cap_hit };
const char* to_string(HistoryStatus s);

struct History {
  SymWord word;                   // concatenated configurations over gamma
  std::vector<std::size_t> ends;  // end offset of each configuration
  HistoryStatus status = HistoryStatus::still_running;
  std::size_t max_cells = 0;      // over configurations reached by machine steps
};

/// Configurations from q0#, an expansion configuration q B # being emitted
/// whenever the head reads #.
History history(const TuringMachine& m, std::size_t max_configs, std::size_t max_cells);

/// Longest configuration (state included, # excluded) over the start and the
/// configurations reached within `max_steps` machine steps.
std::size_t tape_probe(const TuringMachine& m, std::size_t max_steps);

enum class DominoStatus { vacuous, ok, violated, undecided };
const char* to_string(DominoStatus s);

struct DominoCheck {
  DominoStatus status = DominoStatus::vacuous;
  SymWord top, bottom;  // u_lambda and q0# v_lambda
};

/// If u_lambda is a prefix of v_lambda, is v_lambda a prefix of the history?
/// `hist` must be long enough or halted, else the result is undecided.
DominoCheck check_domino_lemma(const TuringMachine& m, const TileSet& tiles,
                               const std::vector<std::size_t>& lambda, const History& hist);
DominoCheck check_domino_lemma(const TuringMachine& m, const TileSet& tiles,
                               const std::vector<std::size_t>& lambda);

/// Words over gamma of length at most |u_i| that are not prefixes of u_i.
std::vector<SymWord> fail_words(const TileSet& tiles, std::size_t i);

Transducer build_up(const TuringMachine& m, const TileSet& tiles);
Transducer build_down(const TuringMachine& m, const TileSet& tiles);
/// T_up plus a branch writing any word at the first position and then
/// reading the input silently.
Transducer build_up_prime(const TuringMachine& m, const TileSet& tiles);
/// Disjoint union of T_down and T_up.
Transducer build_down_prime(const TuringMachine& m, const TileSet& tiles);

}  // namespace origami

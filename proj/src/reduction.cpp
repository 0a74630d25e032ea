#include "origami/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "origami/error.hpp"
#include "text_util.hpp"

namespace origami {

const TuringMachine::Rule* TuringMachine::rule(std::uint32_t state, std::uint32_t letter) const {
  for (const Rule& r : rules)
    if (r.from == state && r.read == letter) return &r;
  return nullptr;
}

std::vector<std::string> TuringMachine::gamma() const {
  std::vector<std::string> g = alphabet;
  g.insert(g.end(), states.begin(), states.end());
  g.push_back("#");
  return g;
}

TuringMachine parse_machine(std::string_view text) {
  TuringMachine m;
  std::map<std::string, std::vector<std::string>> headers;
  std::vector<std::pair<int, std::string>> rule_lines;
  int line_no = 0;
  for (const std::string& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.find("->") != std::string_view::npos) {
      rule_lines.emplace_back(line_no, std::string(line));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: values' or a rule", line_no, 1);
    const std::string key(detail::trim(line.substr(0, colon)));
    if (key != "states" && key != "alphabet" && key != "initial" && key != "final")
      throw ParseError("unknown header '" + key + "'", line_no, 1);
    headers[key] = detail::split_ws(line.substr(colon + 1));
  }
  for (const char* key : {"states", "alphabet", "initial", "final"})
    if (!headers.contains(key) || headers[key].empty()) throw ParseError(std::string("missing '") + key + "'", 0, 0);
  m.states = headers["states"];
  m.alphabet = headers["alphabet"];
  std::set<std::string> names;
  for (const auto* list : {&m.states, &m.alphabet})
    for (const auto& s : *list)
      if (s == "#" || !names.insert(s).second) throw ParseError("symbol '" + s + "' is reserved or repeated", 0, 0);
  auto index = [](const std::vector<std::string>& v, const std::string& s, int line) {
    const auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) throw ParseError("unknown symbol '" + s + "'", line, 1);
    return static_cast<std::uint32_t>(it - v.begin());
  };
  m.initial = index(m.states, headers["initial"].front(), 0);
  m.final = index(m.states, headers["final"].front(), 0);
  for (const auto& [no, line] : rule_lines) {
    const auto arrow = line.find("->");
    const auto lhs = detail::split(line.substr(0, arrow), ',');
    const auto rhs = detail::split(line.substr(arrow + 2), ',');
    if (lhs.size() != 2 || rhs.size() != 3) throw ParseError("expected 'p,a -> q,b,L|R'", no, 1);
    TuringMachine::Rule r;
    r.from = index(m.states, lhs[0], no);
    r.read = index(m.alphabet, lhs[1], no);
    r.to = index(m.states, rhs[0], no);
    r.write = index(m.alphabet, rhs[1], no);
    if (rhs[2] == "L")
      r.dir = Direction::left;
    else if (rhs[2] != "R")
      throw ParseError("direction must be L or R", no, 1);
    if (m.rule(r.from, r.read)) throw ParseError("machine is not deterministic", no, 1);
    m.rules.push_back(r);
  }
  return m;
}

std::string format_machine(const TuringMachine& m) {
  std::ostringstream s;
  s << "states: " << detail::join(m.states, " ") << "\nalphabet: " << detail::join(m.alphabet, " ")
    << "\ninitial: " << m.states[m.initial] << "\nfinal: " << m.states[m.final] << '\n';
  for (const auto& r : m.rules)
    s << m.states[r.from] << ',' << m.alphabet[r.read] << " -> " << m.states[r.to] << ','
      << m.alphabet[r.write] << ',' << (r.dir == Direction::left ? 'L' : 'R') << '\n';
  return s.str();
}

const char* to_string(TileKind k) {
  switch (k) {
    case TileKind::copy: return "copy";
    case TileKind::right: return "right";
    case TileKind::right_expansion: return "right-expansion";
    case TileKind::left: return "left";
    case TileKind::left_expansion: return "left-expansion";
  }
  return "?";
}

std::vector<std::string> TileSet::names() const {
  std::vector<std::string> n;
  for (const auto& t : tiles) n.push_back(t.name);
  return n;
}

TileSet build_tiles(const TuringMachine& m) {
  TileSet ts;
  ts.gamma = m.gamma();
  const Symbol hash = m.hash_symbol();
  auto add = [&](SymWord top, SymWord bottom, TileKind kind) {
    ts.tiles.push_back({"i" + std::to_string(ts.tiles.size() + 1), std::move(top), std::move(bottom), kind});
  };
  for (Symbol a = 0; a < m.alphabet.size(); ++a) add({a}, {a}, TileKind::copy);
  add({hash}, {hash}, TileKind::copy);
  for (const auto& r : m.rules)
    if (r.dir == Direction::right) add({m.state_symbol(r.from), r.read}, {r.write, m.state_symbol(r.to)}, TileKind::right);
  for (std::uint32_t q = 0; q < m.states.size(); ++q)
    add({m.state_symbol(q), hash}, {m.state_symbol(q), 0, hash}, TileKind::right_expansion);
  for (const auto& r : m.rules)
    if (r.dir == Direction::left)
      for (Symbol c = 0; c < m.alphabet.size(); ++c)
        add({c, m.state_symbol(r.from), r.read}, {m.state_symbol(r.to), c, r.write}, TileKind::left);
  for (const auto& r : m.rules)
    if (r.dir == Direction::left)
      add({hash, m.state_symbol(r.from), r.read}, {hash, m.state_symbol(r.to), 0, r.write}, TileKind::left_expansion);
  return ts;
}

std::string format_tiles(const TileSet& t) {
  std::vector<std::string> name, top, bottom;
  for (const auto& tile : t.tiles) {
    name.push_back(tile.name);
    top.push_back(format_word(t.gamma, tile.top, ""));
    bottom.push_back(format_word(t.gamma, tile.bottom, ""));
  }
  std::ostringstream rows[3];
  for (std::size_t i = 0; i < name.size(); ++i) {
    const std::size_t w = std::max({name[i].size(), top[i].size(), bottom[i].size()}) + 2;
    for (auto [row, cell] : {std::pair{0, &name[i]}, {1, &top[i]}, {2, &bottom[i]}}) {
      rows[row] << *cell << std::string(w - cell->size(), ' ');
    }
  }
  std::string out;
  for (auto& r : rows) {
    std::string line = r.str();
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + '\n';
  }
  return out;
}

const char* to_string(HistoryStatus s) {
  switch (s) {
    case HistoryStatus::halted: return "halted";
    case HistoryStatus::still_running: return "still-running";
    case HistoryStatus::cell_cap_hit: return "cell-cap-hit";
  }
  return "?";
}

namespace {

struct Config {
  std::vector<Symbol> tape;  // letters of A
  std::size_t head = 0;      // tape.size() when reading #
  std::uint32_t state = 0;
};

void emit(const TuringMachine& m, const Config& c, History& h) {
  for (std::size_t i = 0; i <= c.tape.size(); ++i) {
    if (i == c.head) h.word.push_back(m.state_symbol(c.state));
    if (i < c.tape.size()) h.word.push_back(c.tape[i]);
  }
  h.word.push_back(m.hash_symbol());
  h.ends.push_back(h.word.size());
}

// Advances one configuration; false when the machine is stuck.
bool advance(const TuringMachine& m, Config& c, bool& machine_step) {
  machine_step = false;
  if (c.head == c.tape.size()) {
    c.tape.push_back(0);
    return true;
  }
  const auto* r = m.rule(c.state, c.tape[c.head]);
  if (!r) return false;
  machine_step = true;
  c.tape[c.head] = r->write;
  c.state = r->to;
  if (r->dir == Direction::right)
    ++c.head;
  else if (c.head == 0)
    c.tape.insert(c.tape.begin(), 0);
  else
    --c.head;
  return true;
}

}  // namespace

History history(const TuringMachine& m, std::size_t max_configs, std::size_t max_cells) {
  if (max_configs == 0 || max_cells == 0) throw Error("history caps must be positive");
  History h;
  Config c{{}, 0, m.initial};
  emit(m, c, h);
  h.max_cells = 1;
  while (h.ends.size() < max_configs) {
    bool step = false;
    if (!advance(m, c, step)) {
      h.status = HistoryStatus::halted;
      return h;
    }
    if (c.tape.size() + 1 > max_cells) {
      h.status = HistoryStatus::cell_cap_hit;
      return h;
    }
    if (step) h.max_cells = std::max(h.max_cells, c.tape.size() + 1);
    emit(m, c, h);
  }
  return h;
}

std::size_t tape_probe(const TuringMachine& m, std::size_t max_steps) {
  Config c{{}, 0, m.initial};
  std::size_t best = 1;
  for (std::size_t steps = 0; steps < max_steps;) {
    bool step = false;
    if (!advance(m, c, step)) break;
    if (step) {
      ++steps;
      best = std::max(best, c.tape.size() + 1);
    }
  }
  return best;
}

const char* to_string(DominoStatus s) {
  switch (s) {
    case DominoStatus::vacuous: return "vacuous";
    case DominoStatus::ok: return "ok";
    case DominoStatus::violated: return "violated";
    case DominoStatus::undecided: return "undecided";
  }
  return "?";
}

namespace {

bool is_prefix(const SymWord& a, const SymWord& b, std::size_t b_len) {
  return a.size() <= b_len && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

DominoCheck check_domino_lemma(const TuringMachine& m, const TileSet& tiles,
                               const std::vector<std::size_t>& lambda, const History& hist) {
  DominoCheck d;
  d.bottom = {m.state_symbol(m.initial), m.hash_symbol()};
  for (std::size_t i : lambda) {
    const Tile& t = tiles.tiles.at(i);
    d.top.insert(d.top.end(), t.top.begin(), t.top.end());
    d.bottom.insert(d.bottom.end(), t.bottom.begin(), t.bottom.end());
  }
  if (!is_prefix(d.top, d.bottom, d.bottom.size())) {
    d.status = DominoStatus::vacuous;
    return d;
  }
  if (d.bottom.size() > hist.word.size() && hist.status != HistoryStatus::halted) {
    d.status = DominoStatus::undecided;
    return d;
  }
  d.status = is_prefix(d.bottom, hist.word, hist.word.size()) ? DominoStatus::ok : DominoStatus::violated;
  return d;
}

DominoCheck check_domino_lemma(const TuringMachine& m, const TileSet& tiles,
                               const std::vector<std::size_t>& lambda) {
  // Each configuration is at least two symbols long, and each tile adds at
  // most four, so this many configurations cover the bottom word.
  const std::size_t configs = 2 * lambda.size() + 2;
  return check_domino_lemma(m, tiles, lambda, history(m, configs, configs + 1));
}

std::vector<SymWord> fail_words(const TileSet& tiles, std::size_t i) {
  const SymWord& u = tiles.tiles.at(i).top;
  std::vector<SymWord> out;
  for_each_word(tiles.gamma.size(), 0, u.size(), [&](const SymWord& w) {
    if (!is_prefix(w, u, u.size())) out.push_back(w);
  });
  return out;
}

namespace {

void add_up(Transducer& t, const TileSet& tiles, std::uint32_t p0, std::uint32_t fail, std::uint32_t p1) {
  for (std::size_t i = 0; i < tiles.tiles.size(); ++i) {
    const int read = static_cast<int>(i);
    t.add_transition({p0, read, tiles.tiles[i].top, Direction::right, p0});
    for (SymWord& w : fail_words(tiles, i)) t.add_transition({p0, read, std::move(w), Direction::right, fail});
    t.add_transition({fail, read, {}, Direction::right, fail});
  }
  for (Symbol g = 0; g < tiles.gamma.size(); ++g) {
    t.add_transition({fail, kEpsilon, {g}, Direction::right, fail});
    t.add_transition({p1, kEpsilon, {g}, Direction::right, p1});
  }
  t.add_transition({p0, kEpsilon, {}, Direction::right, p1});
}

void add_down(Transducer& t, const TuringMachine& m, const TileSet& tiles, std::uint32_t s0, std::uint32_t s1) {
  t.add_transition({s0, kEpsilon, {m.state_symbol(m.initial), m.hash_symbol()}, Direction::right, s1});
  for (std::size_t i = 0; i < tiles.tiles.size(); ++i)
    t.add_transition({s1, static_cast<int>(i), tiles.tiles[i].bottom, Direction::right, s1});
}

}  // namespace

Transducer build_up(const TuringMachine&, const TileSet& tiles) {
  Transducer t(TransducerKind::one_way, tiles.names(), tiles.gamma);
  const auto p0 = t.add_state("p0", true), fail = t.add_state("p_fail", false, true),
             p1 = t.add_state("p1", false, true);
  add_up(t, tiles, p0, fail, p1);
  return t;
}

Transducer build_down(const TuringMachine& m, const TileSet& tiles) {
  Transducer t(TransducerKind::one_way, tiles.names(), tiles.gamma);
  const auto s0 = t.add_state("s0", true), s1 = t.add_state("s1", false, true);
  add_down(t, m, tiles, s0, s1);
  return t;
}

Transducer build_up_prime(const TuringMachine&, const TileSet& tiles) {
  Transducer t(TransducerKind::one_way, tiles.names(), tiles.gamma);
  const auto r0 = t.add_state("r0", true), r1 = t.add_state("r1"), r2 = t.add_state("r2", false, true);
  const auto p0 = t.add_state("p0"), fail = t.add_state("p_fail", false, true), p1 = t.add_state("p1", false, true);
  t.add_transition({r0, kEpsilon, {}, Direction::right, r1});
  for (Symbol g = 0; g < tiles.gamma.size(); ++g) t.add_transition({r1, kEpsilon, {g}, Direction::right, r1});
  for (std::size_t i = 0; i < tiles.tiles.size(); ++i) {
    t.add_transition({r1, static_cast<int>(i), {}, Direction::right, r2});
    t.add_transition({r2, static_cast<int>(i), {}, Direction::right, r2});
  }
  t.add_transition({r0, kEpsilon, {}, Direction::right, p0});
  add_up(t, tiles, p0, fail, p1);
  return t;
}

Transducer build_down_prime(const TuringMachine& m, const TileSet& tiles) {
  Transducer t(TransducerKind::one_way, tiles.names(), tiles.gamma);
  const auto s0 = t.add_state("s0", true), s1 = t.add_state("s1", false, true);
  const auto p0 = t.add_state("p0", true), fail = t.add_state("p_fail", false, true),
             p1 = t.add_state("p1", false, true);
  add_down(t, m, tiles, s0, s1);
  add_up(t, tiles, p0, fail, p1);
  return t;
}

}  // namespace origami

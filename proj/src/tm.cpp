#include "tm2smm/tm.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace tm2smm {

char move_char(Move m) { return m == Move::left ? 'L' : 'R'; }

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& v,
                                    std::string_view token) {
  auto it = std::find(v.begin(), v.end(), token);
  if (it == v.end()) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

void require_unique(const std::vector<std::string>& v, const char* what) {
  std::set<std::string> seen;
  for (const auto& tok : v) {
    if (!seen.insert(tok).second)
      throw std::invalid_argument(std::string("duplicate ") + what + " '" +
                                  tok + "'");
  }
}

}  // namespace

std::optional<std::size_t> TuringMachine::symbol_index(
    std::string_view symbol) const {
  return index_of(alphabet, symbol);
}

std::optional<std::size_t> TuringMachine::state_index(
    std::string_view state) const {
  return index_of(states, state);
}

SpecError::SpecError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

void validate(const TuringMachine& m) {
  if (m.alphabet.empty()) throw std::invalid_argument("alphabet is empty");
  if (m.states.empty()) throw std::invalid_argument("state set is empty");
  require_unique(m.alphabet, "symbol");
  require_unique(m.states, "state");
  if (m.blank != m.alphabet.front())
    throw std::invalid_argument("blank '" + m.blank +
                                "' must be the first symbol of the alphabet");
  if (!m.state_index(m.start_state))
    throw std::invalid_argument("undeclared start state '" + m.start_state +
                                "'");
  for (const auto& [key, t] : m.table) {
    if (!m.state_index(key.first) || !m.state_index(t.next))
      throw std::invalid_argument("rule (" + key.first + ", " + key.second +
                                  ") uses an undeclared state");
    if (!m.symbol_index(key.second) || !m.symbol_index(t.write))
      throw std::invalid_argument("rule (" + key.first + ", " + key.second +
                                  ") uses an undeclared symbol");
  }
}

void validate(const TuringMachine& m, const TmConfiguration& c) {
  validate(m);
  if (c.cells.empty()) throw std::invalid_argument("tape is empty");
  if (c.head >= c.cells.size())
    throw std::invalid_argument("head " + std::to_string(c.head) +
                                " is outside the tape");
  if (!m.state_index(c.state))
    throw std::invalid_argument("undeclared state '" + c.state + "'");
  for (const auto& s : c.cells) {
    if (!m.symbol_index(s))
      throw std::invalid_argument("undeclared tape symbol '" + s + "'");
  }
}

TmSpec parse_tm_spec(std::string_view text) {
  TmSpec spec;
  auto& m = spec.machine;
  bool have_symbols = false, have_states = false, have_start = false;
  bool have_blank = false, have_tape = false;
  std::optional<std::size_t> head;
  std::size_t head_line = 0;

  std::size_t lineno = 0;
  for (auto raw : split_lines(text)) {
    ++lineno;
    auto toks = tokenize(strip_comment(raw, '#'));
    if (toks.empty()) continue;
    const auto& kw = toks[0];
    std::vector<std::string> args(toks.begin() + 1, toks.end());
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw SpecError(lineno, "'" + kw + "' expects " + std::to_string(n) +
                                    " argument(s)");
    };

    if (kw == "symbols") {
      if (have_symbols) throw SpecError(lineno, "duplicate 'symbols'");
      if (args.empty()) throw SpecError(lineno, "'symbols' needs at least one symbol");
      m.alphabet = args;
      try {
        require_unique(m.alphabet, "symbol");
      } catch (const std::invalid_argument& e) {
        throw SpecError(lineno, e.what());
      }
      have_symbols = true;
    } else if (kw == "blank") {
      need(1);
      if (!have_symbols) throw SpecError(lineno, "'blank' before 'symbols'");
      if (args[0] != m.alphabet.front())
        throw SpecError(lineno, "blank '" + args[0] +
                                    "' must be listed first in 'symbols'");
      m.blank = args[0];
      have_blank = true;
    } else if (kw == "states") {
      if (have_states) throw SpecError(lineno, "duplicate 'states'");
      if (args.empty()) throw SpecError(lineno, "'states' needs at least one state");
      m.states = args;
      try {
        require_unique(m.states, "state");
      } catch (const std::invalid_argument& e) {
        throw SpecError(lineno, e.what());
      }
      have_states = true;
    } else if (kw == "start") {
      need(1);
      if (!have_states) throw SpecError(lineno, "'start' before 'states'");
      if (!m.state_index(args[0]))
        throw SpecError(lineno, "undeclared start state '" + args[0] + "'");
      m.start_state = args[0];
      have_start = true;
    } else if (kw == "rule") {
      // rule <S> <sym> -> <sym'> <L|R> <S'>; the arrow is optional
      if (args.size() == 6 && args[2] == "->") args.erase(args.begin() + 2);
      need(5);
      if (!have_symbols || !have_states)
        throw SpecError(lineno, "'rule' before 'symbols' and 'states'");
      const auto& s = args[0];
      const auto& sym = args[1];
      const auto& wr = args[2];
      const auto& mv = args[3];
      const auto& nx = args[4];
      for (const auto* st : {&s, &nx}) {
        if (!m.state_index(*st))
          throw SpecError(lineno, "undeclared state '" + *st + "'");
      }
      for (const auto* sy : {&sym, &wr}) {
        if (!m.symbol_index(*sy))
          throw SpecError(lineno, "undeclared symbol '" + *sy + "'");
      }
      if (mv != "L" && mv != "R")
        throw SpecError(lineno, "move must be L or R, got '" + mv + "'");
      Transition t{wr, mv == "L" ? Move::left : Move::right, nx};
      if (!m.table.emplace(std::pair{s, sym}, t).second)
        throw SpecError(lineno, "duplicate rule for (" + s + ", " + sym + ")");
    } else if (kw == "tape") {
      if (have_tape) throw SpecError(lineno, "duplicate 'tape'");
      if (!have_symbols) throw SpecError(lineno, "'tape' before 'symbols'");
      if (args.empty()) throw SpecError(lineno, "'tape' needs at least one cell");
      for (const auto& c : args) {
        if (!m.symbol_index(c))
          throw SpecError(lineno, "undeclared tape symbol '" + c + "'");
      }
      spec.initial.cells = args;
      have_tape = true;
    } else if (kw == "head") {
      need(1);
      std::size_t h = 0;
      auto [p, ec] =
          std::from_chars(args[0].data(), args[0].data() + args[0].size(), h);
      if (ec != std::errc{} || p != args[0].data() + args[0].size())
        throw SpecError(lineno, "bad head index '" + args[0] + "'");
      head = h;
      head_line = lineno;
    } else {
      throw SpecError(lineno, "unknown keyword '" + kw + "'");
    }
  }

  ++lineno;
  if (!have_symbols) throw SpecError(lineno, "missing 'symbols'");
  if (!have_states) throw SpecError(lineno, "missing 'states'");
  if (!have_start) throw SpecError(lineno, "missing 'start'");
  if (!have_blank) m.blank = m.alphabet.front();
  if (!have_tape) spec.initial.cells = {m.blank};
  spec.initial.head = head.value_or(0);
  if (spec.initial.head >= spec.initial.cells.size())
    throw SpecError(head_line, "head index outside the initial tape");
  spec.initial.state = m.start_state;
  return spec;
}

std::string format_tm_spec(const TmSpec& spec) {
  const auto& m = spec.machine;
  std::ostringstream out;
  out << "symbols " << join(m.alphabet, " ") << '\n';
  out << "blank " << m.blank << '\n';
  out << "states " << join(m.states, " ") << '\n';
  out << "start " << m.start_state << '\n';
  // declaration order, not map order, so the table reads like the source
  for (const auto& s : m.states) {
    for (const auto& sym : m.alphabet) {
      auto it = m.table.find({s, sym});
      if (it == m.table.end()) continue;
      const auto& t = it->second;
      out << "rule " << s << ' ' << sym << ' ' << t.write << ' '
          << move_char(t.move) << ' ' << t.next << '\n';
    }
  }
  out << "tape " << join(spec.initial.cells, " ") << '\n';
  out << "head " << spec.initial.head << '\n';
  return out.str();
}

std::optional<Transition> lookup_transition(const TuringMachine& m,
                                            std::string_view state,
                                            std::string_view symbol) {
  auto it = m.table.find({std::string(state), std::string(symbol)});
  if (it == m.table.end()) return std::nullopt;
  return it->second;
}

std::optional<TmConfiguration> tm_step(const TuringMachine& m,
                                       const TmConfiguration& c) {
  auto t = lookup_transition(m, c.state, c.cells[c.head]);
  if (!t) return std::nullopt;

  TmConfiguration next = c;
  next.cells[next.head] = t->write;
  if (t->move == Move::left) {
    if (next.head == 0)
      next.cells.insert(next.cells.begin(), m.blank);
    else
      --next.head;
  } else {
    ++next.head;
    if (next.head == next.cells.size()) next.cells.push_back(m.blank);
  }
  next.state = t->next;
  return next;
}

TmRun tm_run(const TuringMachine& m, const TmConfiguration& c,
             std::size_t max_steps) {
  TmRun run;
  run.trace.push_back(c);
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto next = tm_step(m, run.trace.back());
    if (!next) {
      run.status = RunStatus::halted;
      return run;
    }
    run.trace.push_back(std::move(*next));
  }
  // a machine sitting on a missing rule is halted even with no budget left
  if (!lookup_transition(m, run.trace.back().state,
                         run.trace.back().cells[run.trace.back().head]))
    run.status = RunStatus::halted;
  return run;
}

}  // namespace tm2smm

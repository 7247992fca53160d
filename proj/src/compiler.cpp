#include "tm2smm/compiler.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "text_util.hpp"

namespace tm2smm {

std::vector<std::string> EncodingPlan::directions() const {
  std::vector<std::string> d{"f", "o", "e", "w"};
  for (std::size_t j = 0; j < k; ++j) d.push_back("b" + std::to_string(j));
  return d;
}

std::size_t EncodingPlan::symbol_index(const std::string& s) const {
  auto it = std::find(symbols.begin(), symbols.end(), s);
  if (it == symbols.end())
    throw std::invalid_argument("symbol '" + s + "' not in plan");
  return static_cast<std::size_t>(it - symbols.begin());
}

std::size_t EncodingPlan::state_index(const std::string& s) const {
  auto it = std::find(states.begin(), states.end(), s);
  if (it == states.end())
    throw std::invalid_argument("state '" + s + "' not in plan");
  return static_cast<std::size_t>(it - states.begin());
}

std::size_t bit_width(std::size_t count) {
  if (count == 0) throw std::invalid_argument("bit_width of 0");
  std::size_t w = 1;
  while (w < 64 && (std::size_t{1} << w) < count) ++w;
  return w;
}

EncodingPlan plan_encoding(const TuringMachine& m) {
  EncodingPlan plan;
  plan.n = bit_width(m.alphabet.size());
  plan.m = bit_width(m.states.size());
  plan.k = std::max(plan.n, plan.m);
  plan.symbols = m.alphabet;
  plan.states = m.states;
  return plan;
}

std::vector<bool> encode_index(std::size_t i, std::size_t width) {
  if (width < 64 && i >> width)
    throw std::out_of_range("index " + std::to_string(i) + " needs more than " +
                            std::to_string(width) + " bits");
  std::vector<bool> bits(width);
  for (std::size_t j = 0; j < width; ++j) bits[j] = (i >> j) & 1;
  return bits;
}

namespace {

Path path(std::initializer_list<Direction> steps) { return Path{steps}; }

Line set(Path x, Direction d, Path y, std::string comment = {}) {
  return Line{SetInstr{std::move(x), d, std::move(y)}, std::move(comment)};
}

Line if_eq(Path x, Path y, std::int64_t rel, std::string comment = {}) {
  return Line{IfInstr{std::move(x), std::move(y), LineRef::relative(rel)},
              std::move(comment)};
}

void extend(std::vector<Line>& out, std::vector<Line> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
}

// Lays out straight-line code with forward jumps to named positions and
// resolves them to relative line references.
class Assembler {
 public:
  using Label = std::size_t;

  Label label() {
    bound_.emplace_back();
    return bound_.size() - 1;
  }
  void bind(Label l) { bound_[l] = lines_.size(); }
  void emit(Line line) { lines_.push_back(std::move(line)); }
  void emit(std::vector<Line> block) { extend(lines_, std::move(block)); }
  void jump_if(Path x, Path y, Label to, std::string comment = {}) {
    fixups_.push_back({lines_.size(), to});
    emit(if_eq(std::move(x), std::move(y), 1, std::move(comment)));
  }

  std::vector<Line> finish() {
    for (const auto& [at, l] : fixups_) {
      if (!bound_[l]) throw std::logic_error("unbound label");
      auto rel = static_cast<std::int64_t>(*bound_[l]) -
                 static_cast<std::int64_t>(at);
      if (rel == 0) throw std::logic_error("self jump");
      std::get<IfInstr>(lines_[at].instr).target = LineRef::relative(rel);
    }
    return std::move(lines_);
  }

 private:
  std::vector<Line> lines_;
  std::vector<std::optional<std::size_t>> bound_;
  std::vector<std::pair<std::size_t, Label>> fixups_;
};

std::string bits_string(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

// Appends a tape/head pair on the outer side of the head node at the center.
// Afterwards the center is the new head node. The old outer links (and for
// the tape node its symbol) are the only pre-existing edges touched.
std::vector<Line> emit_new_cell(Side side, const std::vector<bool>& symbol_bits,
                                std::size_t k) {
  const Direction out = side == Side::east ? kE : kW;
  const Direction in = side == Side::east ? kW : kE;
  const Path here;
  std::vector<Line> code;
  code.push_back(Line{NewInstr{"tape"}, "tape node, all edges on old head"});
  code.push_back(set(here, in, path({kF, kF}), "link to old tape node"));
  code.push_back(set(here, kO, path({kF, kO})));
  code.push_back(set(here, out, path({kO}), "outer end"));
  code.push_back(set(path({in}), out, here));
  auto bits = symbol_bits;
  bits.resize(k, false);
  extend(code, emit_write_bits(here, bits));
  code.push_back(Line{NewInstr{"head"}, "head node, all edges on new tape"});
  code.push_back(set(here, kO, path({kF, kO})));
  code.push_back(set(here, in, path({kF, kF}), "link to old head node"));
  code.push_back(set(path({kF}), kF, here));
  code.push_back(set(here, out, path({kO}), "outer end"));
  code.push_back(set(path({in}), out, here));
  extend(code, emit_write_bits(here, std::vector<bool>(k, false)));
  return code;
}

void check_token(const std::string& tok) {
  if (tok.find(';') != std::string::npos)
    throw std::invalid_argument("token '" + tok +
                                "' cannot be carried in a program comment");
}

}  // namespace

std::vector<Line> emit_write_bits(const Path& target,
                                  const std::vector<bool>& bits) {
  std::vector<Line> code;
  for (std::size_t j = 0; j < bits.size(); ++j)
    code.push_back(set(target, bit_direction(j), bits[j] ? path({kO}) : target));
  return code;
}

std::vector<Line> emit_extension(Side side, const EncodingPlan& plan) {
  auto code = emit_new_cell(side, encode_index(0, plan.n), plan.k);
  code.front().comment = std::string("extend tape ") +
                         (side == Side::east ? "east" : "west");
  code.push_back(Line{CenterInstr{path({side == Side::east ? kW : kE})},
                      "back on the boundary head"});
  return code;
}

std::vector<Line> emit_transition(const Transition& t, const std::string& symbol,
                                  const std::string& state,
                                  const EncodingPlan& plan) {
  const Direction out = t.move == Move::right ? kE : kW;
  const auto write = encode_index(plan.symbol_index(t.write), plan.n);
  const auto next = encode_index(plan.state_index(t.next), plan.m);

  std::vector<Line> code = emit_write_bits(path({kF}), write);
  code.front().comment = "(" + state + ", " + symbol + ") -> " + t.write + " " +
                         move_char(t.move) + " " + t.next + ": write " +
                         t.write + " = " + bits_string(write);
  auto ext = emit_extension(t.move == Move::right ? Side::east : Side::west,
                            plan);
  code.push_back(if_eq(path({out}), path({kO}), 2, "at the boundary?"));
  code.push_back(if_eq({}, {}, static_cast<std::int64_t>(ext.size()) + 1));
  extend(code, std::move(ext));
  code.push_back(Line{CenterInstr{path({out})},
                      std::string("move ") + move_char(t.move) +
                          ", then write the state"});
  auto state_bits = emit_write_bits({}, next);
  state_bits.front().comment = "state " + t.next + " = " + bits_string(next);
  extend(code, std::move(state_bits));
  return code;
}

std::vector<Line> emit_step(const TuringMachine& m, const EncodingPlan& plan) {
  Assembler a;
  const auto end = a.label();

  auto symbol_tree = [&](auto&& self, std::size_t state, std::size_t j,
                         std::size_t value) -> void {
    if (j == plan.n) {
      if (value >= plan.symbols.size()) {
        a.emit(Line{StopInstr{kBadCodeMessage},
                    "symbol code " + std::to_string(value) + " unused"});
        return;
      }
      const auto& st = plan.states[state];
      const auto& sym = plan.symbols[value];
      auto t = lookup_transition(m, st, sym);
      if (!t) {
        a.emit(Line{StopInstr{std::string(kHaltMessage) + " " + st + " " + sym},
                    "no rule for (" + st + ", " + sym + ")"});
        return;
      }
      a.emit(emit_transition(*t, sym, st, plan));
      a.jump_if({}, {}, end);
      return;
    }
    const auto one = a.label();
    a.jump_if(path({kF, bit_direction(j)}), path({kO}), one,
              "symbol bit " + std::to_string(j));
    self(self, state, j + 1, value);
    a.bind(one);
    self(self, state, j + 1, value | (std::size_t{1} << j));
  };

  auto state_tree = [&](auto&& self, std::size_t j, std::size_t value) -> void {
    if (j == plan.m) {
      if (value >= plan.states.size()) {
        a.emit(Line{StopInstr{kBadCodeMessage},
                    "state code " + std::to_string(value) + " unused"});
        return;
      }
      symbol_tree(symbol_tree, value, 0, 0);
      return;
    }
    const auto one = a.label();
    a.jump_if(path({bit_direction(j)}), path({kO}), one,
              "state bit " + std::to_string(j));
    self(self, j + 1, value);
    a.bind(one);
    self(self, j + 1, value | (std::size_t{1} << j));
  };

  state_tree(state_tree, 0, 0);
  a.bind(end);
  a.emit(Line{CenterInstr{{}}, "end of step"});
  return a.finish();
}

std::vector<Line> emit_prologue(const TuringMachine& m,
                                const TmConfiguration& c0,
                                const EncodingPlan& plan) {
  validate(m, c0);
  const Path here;
  std::vector<Line> code;
  code.push_back(Line{NewInstr{"origin"}, "Origin: every edge a self-loop"});

  for (std::size_t i = 0; i < c0.cells.size(); ++i) {
    auto bits = encode_index(plan.symbol_index(c0.cells[i]), plan.k);
    std::vector<Line> cell;
    if (i == 0) {
      // The Origin is the previous center, so o/e/w are already right.
      cell.push_back(Line{NewInstr{"tape"}, {}});
      extend(cell, emit_write_bits(here, bits));
      cell.push_back(Line{NewInstr{"head"}, {}});
      cell.push_back(set(here, kO, path({kF, kO})));
      cell.push_back(set(here, kE, path({kO})));
      cell.push_back(set(here, kW, path({kO})));
      cell.push_back(set(path({kF}), kF, here));
      extend(cell, emit_write_bits(here, std::vector<bool>(plan.k, false)));
    } else {
      cell = emit_new_cell(Side::east, bits, plan.k);
    }
    cell.front().comment = "cell " + std::to_string(i) + " = " + c0.cells[i];
    extend(code, std::move(cell));
  }

  for (std::size_t i = c0.cells.size() - 1; i > c0.head; --i)
    code.push_back(Line{CenterInstr{path({kW})}, "walk to the initial head"});
  auto start = encode_index(plan.state_index(c0.state), plan.m);
  auto state_bits = emit_write_bits(here, start);
  state_bits.front().comment = "state " + c0.state + " = " + bits_string(start);
  extend(code, std::move(state_bits));
  return code;
}

std::vector<std::string> plan_header(const EncodingPlan& plan) {
  return {
      "compiled by tm2smm",
      "plan: symbols " + join(plan.symbols, " "),
      "plan: states " + join(plan.states, " "),
      "plan: bits " + std::to_string(plan.n) + " " + std::to_string(plan.m),
      "bits are LSB first, bj -> self is 0, bj -> o is 1",
      "a step re-centers on the destination head before writing the state",
  };
}

EncodingPlan read_plan(const SmmProgram& p) {
  EncodingPlan plan;
  bool have_symbols = false, have_states = false, have_bits = false;
  for (const auto& h : p.header) {
    auto toks = tokenize(h);
    if (toks.size() < 2 || toks[0] != "plan:") continue;
    std::vector<std::string> rest(toks.begin() + 2, toks.end());
    if (toks[1] == "symbols") {
      plan.symbols = rest;
      have_symbols = true;
    } else if (toks[1] == "states") {
      plan.states = rest;
      have_states = true;
    } else if (toks[1] == "bits") {
      if (rest.size() != 2) throw ProgramError(0, "malformed plan bits");
      try {
        plan.n = std::stoul(rest[0]);
        plan.m = std::stoul(rest[1]);
      } catch (const std::exception&) {
        throw ProgramError(0, "malformed plan bits");
      }
      have_bits = true;
    }
  }
  if (!have_symbols || !have_states || !have_bits)
    throw ProgramError(0, "program carries no encoding plan");
  if (plan.symbols.empty() || plan.states.empty())
    throw ProgramError(0, "empty symbol or state list in plan");
  if (plan.n != bit_width(plan.symbols.size()) ||
      plan.m != bit_width(plan.states.size()))
    throw ProgramError(0, "plan bit widths do not match its symbol/state lists");
  plan.k = std::max(plan.n, plan.m);
  if (p.directions != plan.directions())
    throw ProgramError(0, "declared directions do not match the plan");
  return plan;
}

Compiled compile(const TuringMachine& m, const TmConfiguration& c0) {
  validate(m, c0);
  for (const auto& s : m.alphabet) check_token(s);
  for (const auto& s : m.states) check_token(s);

  Compiled out;
  out.plan = plan_encoding(m);
  out.program.header = plan_header(out.plan);
  out.program.directions = out.plan.directions();
  out.program.sections.push_back({"prologue", emit_prologue(m, c0, out.plan)});
  out.program.sections.push_back({"step", emit_step(m, out.plan)});
  validate(out.program);
  return out;
}

}  // namespace tm2smm

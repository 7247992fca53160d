#include "tm2smm/smm.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace tm2smm {

ProgramError::ProgramError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                              : what),
      line_(line) {}

const Section* SmmProgram::find_section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<Direction> SmmProgram::direction(std::string_view name) const {
  auto it = std::find(directions.begin(), directions.end(), name);
  if (it == directions.end()) return std::nullopt;
  return Direction{static_cast<std::uint16_t>(it - directions.begin())};
}

namespace {

bool valid_direction_name(std::string_view name) {
  return !name.empty() && name != "@" &&
         name.find('.') == std::string_view::npos &&
         name.find(';') == std::string_view::npos;
}

void check_path(const SmmProgram& p, const Path& x, const std::string& where) {
  for (auto d : x.steps) {
    if (d.index >= p.directions.size())
      throw ProgramError(0, where + ": undeclared direction #" +
                                std::to_string(d.index));
  }
}

}  // namespace

void validate(const SmmProgram& p) {
  std::set<std::string> names;
  for (const auto& d : p.directions) {
    if (!valid_direction_name(d))
      throw ProgramError(0, "bad direction name '" + d + "'");
    if (!names.insert(d).second)
      throw ProgramError(0, "duplicate direction '" + d + "'");
  }
  std::set<std::string> section_names;
  for (const auto& s : p.sections) {
    if (!section_names.insert(s.name).second)
      throw ProgramError(0, "duplicate section '" + s.name + "'");
    const auto n = static_cast<std::int64_t>(s.lines.size());
    for (std::size_t i = 0; i < s.lines.size(); ++i) {
      const auto where = s.name + ":" + std::to_string(i + 1);
      std::visit(
          [&](const auto& in) {
            using T = std::decay_t<decltype(in)>;
            if constexpr (std::is_same_v<T, SetInstr>) {
              check_path(p, in.x, where);
              check_path(p, in.y, where);
              if (in.d.index >= p.directions.size())
                throw ProgramError(0, where + ": undeclared direction #" +
                                          std::to_string(in.d.index));
            } else if constexpr (std::is_same_v<T, CenterInstr>) {
              check_path(p, in.x, where);
            } else if constexpr (std::is_same_v<T, IfInstr>) {
              check_path(p, in.x, where);
              check_path(p, in.y, where);
              if (in.target.kind == LineRef::Kind::absolute &&
                  in.target.value < 1)
                throw ProgramError(0, where + ": absolute line must be >= 1");
              if (in.target.kind == LineRef::Kind::relative &&
                  in.target.value == 0)
                throw ProgramError(0, where + ": relative jump of 0");
              auto t = in.target.resolve(static_cast<std::int64_t>(i + 1));
              if (t < 1 || t > n)
                throw ProgramError(0, where + ": jump target " +
                                          std::to_string(t) +
                                          " outside section of " +
                                          std::to_string(n) + " lines");
            } else if constexpr (std::is_same_v<T, NewInstr>) {
              if (in.label.empty() || tokenize(in.label).size() != 1 ||
                  in.label.find(';') != std::string::npos)
                throw ProgramError(0, where + ": bad node label");
            } else if constexpr (std::is_same_v<T, StopInstr>) {
              if (in.message.find(';') != std::string::npos ||
                  in.message.find('\n') != std::string::npos)
                throw ProgramError(0, where + ": stop message may not contain ';' or newline");
            }
          },
          s.lines[i].instr);
    }
  }
  for (const char* required : {"prologue", "step"}) {
    if (!p.find_section(required))
      throw ProgramError(0, std::string("missing section '") + required + "'");
  }
}

namespace {

struct ProgramParser {
  SmmProgram prog;
  std::size_t lineno = 0;
  bool have_directions = false;
  std::vector<std::vector<std::size_t>> source;  // per section, per line

  Path path(std::string_view tok) {
    Path x;
    if (tok == "@") return x;
    std::size_t start = 0;
    while (true) {
      auto dot = tok.find('.', start);
      auto name = tok.substr(start, dot == std::string_view::npos
                                        ? std::string_view::npos
                                        : dot - start);
      auto d = prog.direction(name);
      if (!d)
        throw ProgramError(lineno,
                           "undeclared direction '" + std::string(name) + "'");
      x.steps.push_back(*d);
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    return x;
  }

  Direction direction(std::string_view tok) {
    auto d = prog.direction(tok);
    if (!d)
      throw ProgramError(lineno,
                         "undeclared direction '" + std::string(tok) + "'");
    return *d;
  }

  LineRef line_ref(const std::string& tok) {
    std::string_view digits = tok;
    LineRef::Kind kind = LineRef::Kind::absolute;
    std::int64_t sign = 1;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
      kind = LineRef::Kind::relative;
      sign = digits[0] == '-' ? -1 : 1;
      digits.remove_prefix(1);
    }
    std::int64_t k = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || ec != std::errc{} ||
        p != digits.data() + digits.size() || k < 1)
      throw ProgramError(lineno, "bad line reference '" + tok + "'");
    return {kind, sign * k};
  }

  Instruction instruction(std::string_view body) {
    auto toks = tokenize(body);
    if (toks.empty()) throw ProgramError(lineno, "missing instruction");
    const auto& op = toks[0];
    auto arity = [&](std::size_t n) {
      if (toks.size() != n)
        throw ProgramError(lineno, "malformed '" + op + "' instruction");
    };
    if (op == "new") {
      arity(2);
      return NewInstr{toks[1]};
    }
    if (op == "set") {
      arity(5);
      if (toks[3] != "to") throw ProgramError(lineno, "expected 'to' in set");
      return SetInstr{path(toks[1]), direction(toks[2]), path(toks[4])};
    }
    if (op == "center") {
      arity(2);
      return CenterInstr{path(toks[1])};
    }
    if (op == "if") {
      arity(5);
      if (toks[3] != "then") throw ProgramError(lineno, "expected 'then' in if");
      return IfInstr{path(toks[1]), path(toks[2]), line_ref(toks[4])};
    }
    if (op == "stop") {
      auto rest = trim(body);
      rest.remove_prefix(4);
      return StopInstr{std::string(trim(rest))};
    }
    throw ProgramError(lineno, "unknown instruction '" + op + "'");
  }

  void line(std::string_view raw) {
    auto semi = raw.find(';');
    auto code = trim(raw.substr(0, semi));
    std::string comment;
    if (semi != std::string_view::npos)
      comment = std::string(trim(raw.substr(semi + 1)));

    if (code.empty()) {
      // Standalone comments before the first section form the header.
      if (semi != std::string_view::npos && prog.sections.empty())
        prog.header.push_back(comment);
      return;
    }
    auto toks = tokenize(code);
    if (toks[0] == ".directions") {
      if (have_directions) throw ProgramError(lineno, "duplicate .directions");
      if (!prog.sections.empty())
        throw ProgramError(lineno, ".directions must precede sections");
      std::set<std::string> seen;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!valid_direction_name(toks[i]))
          throw ProgramError(lineno, "bad direction name '" + toks[i] + "'");
        if (!seen.insert(toks[i]).second)
          throw ProgramError(lineno, "duplicate direction '" + toks[i] + "'");
        prog.directions.push_back(toks[i]);
      }
      if (prog.directions.size() > 0xffff)
        throw ProgramError(lineno, "too many directions");
      have_directions = true;
      return;
    }
    if (toks[0] == ".section") {
      if (toks.size() != 2) throw ProgramError(lineno, "malformed .section");
      if (!have_directions)
        throw ProgramError(lineno, ".section before .directions");
      if (prog.find_section(toks[1]))
        throw ProgramError(lineno, "duplicate section '" + toks[1] + "'");
      prog.sections.push_back(Section{toks[1], {}});
      source.emplace_back();
      return;
    }
    if (prog.sections.empty())
      throw ProgramError(lineno, "instruction outside any section");

    auto& section = prog.sections.back();
    auto sp = code.find_first_of(" \t");
    auto num = code.substr(0, sp);
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc{} || p != num.data() + num.size())
      throw ProgramError(lineno, "expected line number, got '" +
                                     std::string(num) + "'");
    if (n != section.lines.size() + 1)
      throw ProgramError(lineno, "line number " + std::to_string(n) +
                                     " out of sequence, expected " +
                                     std::to_string(section.lines.size() + 1));
    if (sp == std::string_view::npos)
      throw ProgramError(lineno, "missing instruction");
    section.lines.push_back(Line{instruction(code.substr(sp)), comment});
    source.back().push_back(lineno);
  }
};

}  // namespace

SmmProgram parse_smm_program(std::string_view text) {
  ProgramParser parser;
  for (auto raw : split_lines(text)) {
    ++parser.lineno;
    parser.line(raw);
  }
  const auto eof = parser.lineno + 1;
  if (!parser.have_directions) throw ProgramError(eof, "missing .directions");

  // Jump bounds are reported against the source line of the offending `if`.
  for (std::size_t s = 0; s < parser.prog.sections.size(); ++s) {
    const auto& lines = parser.prog.sections[s].lines;
    const auto n = static_cast<std::int64_t>(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto* in = std::get_if<IfInstr>(&lines[i].instr);
      if (!in) continue;
      auto t = in->target.resolve(static_cast<std::int64_t>(i + 1));
      if (t < 1 || t > n)
        throw ProgramError(parser.source[s][i],
                           "jump target " + std::to_string(t) +
                               " outside section '" +
                               parser.prog.sections[s].name + "' of " +
                               std::to_string(n) + " lines");
    }
  }
  try {
    validate(parser.prog);
  } catch (const ProgramError& e) {
    throw ProgramError(eof, e.what());
  }
  return std::move(parser.prog);
}

std::string format_path(const SmmProgram& p, const Path& x) {
  if (x.empty()) return "@";
  std::string out;
  for (std::size_t i = 0; i < x.steps.size(); ++i) {
    if (i) out += '.';
    out += p.directions.at(x.steps[i].index);
  }
  return out;
}

namespace {

std::string format_line_ref(const LineRef& r) {
  if (r.kind == LineRef::Kind::absolute) return std::to_string(r.value);
  return (r.value > 0 ? "+" : "") + std::to_string(r.value);
}

}  // namespace

std::string format_instruction(const SmmProgram& p, const Instruction& in) {
  return std::visit(
      [&](const auto& i) -> std::string {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, NewInstr>) {
          return "new " + i.label;
        } else if constexpr (std::is_same_v<T, SetInstr>) {
          return "set " + format_path(p, i.x) + " " +
                 p.directions.at(i.d.index) + " to " + format_path(p, i.y);
        } else if constexpr (std::is_same_v<T, CenterInstr>) {
          return "center " + format_path(p, i.x);
        } else if constexpr (std::is_same_v<T, IfInstr>) {
          return "if " + format_path(p, i.x) + " " + format_path(p, i.y) +
                 " then " + format_line_ref(i.target);
        } else {
          return i.message.empty() ? "stop" : "stop " + i.message;
        }
      },
      in);
}

std::string format_smm_program(const SmmProgram& p) {
  std::ostringstream out;
  for (const auto& h : p.header) out << (h.empty() ? ";" : "; " + h) << '\n';
  out << ".directions";
  for (const auto& d : p.directions) out << ' ' << d;
  out << '\n';
  for (const auto& s : p.sections) {
    out << ".section " << s.name << '\n';
    for (std::size_t i = 0; i < s.lines.size(); ++i) {
      std::string text =
          std::to_string(i + 1) + " " + format_instruction(p, s.lines[i].instr);
      if (!s.lines[i].comment.empty()) {
        if (text.size() < 32) text.resize(32, ' ');
        text += " ; " + s.lines[i].comment;
      }
      out << text << '\n';
    }
  }
  return out.str();
}

SmmMachine::SmmMachine(std::vector<std::string> directions)
    : directions_(std::move(directions)) {}

std::optional<NodeId> SmmMachine::resolve(const Path& x) const {
  if (!center_) throw SmmRuntimeError("path evaluated with no center");
  NodeId at = *center_;
  for (auto d : x.steps) {
    if (d.index >= directions_.size()) return std::nullopt;
    at = target(at, d);
  }
  return at;
}

NodeId SmmMachine::new_node(std::string label) {
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(std::move(label));
  edges_.resize(edges_.size() + directions_.size(), center_.value_or(id));
  center_ = id;
  return id;
}

void SmmMachine::set_edge(NodeId n, Direction d, NodeId to) {
  if (n >= labels_.size() || to >= labels_.size() ||
      d.index >= directions_.size())
    throw SmmRuntimeError("set_edge outside the graph");
  edges_[n * directions_.size() + d.index] = to;
}

void SmmMachine::set_center(NodeId n) {
  if (n >= labels_.size()) throw SmmRuntimeError("center outside the graph");
  center_ = n;
}

void SmmMachine::halt(std::string message) {
  halted_ = true;
  stop_message_ = std::move(message);
}

ExecResult exec_instruction(SmmMachine& m, const SmmProgram& p,
                            const Section& section, std::size_t line) {
  if (line < 1 || line > section.lines.size())
    throw SmmRuntimeError(section.name + ":" + std::to_string(line) +
                          ": line outside section");
  auto fail = [&](const std::string& what) -> SmmRuntimeError {
    return SmmRuntimeError(section.name + ":" + std::to_string(line) + ": " +
                           what);
  };
  auto eval = [&](const Path& x) -> NodeId {
    if (!m.center()) throw fail("no center");
    auto n = m.resolve(x);
    if (!n) throw fail("invalid path '" + format_path(p, x) + "'");
    return *n;
  };

  const auto& in = section.lines[line - 1].instr;
  if (const auto* i = std::get_if<NewInstr>(&in)) {
    m.new_node(i->label);
  } else if (const auto* i = std::get_if<SetInstr>(&in)) {
    const NodeId from = eval(i->x);
    const NodeId to = eval(i->y);
    m.set_edge(from, i->d, to);
  } else if (const auto* i = std::get_if<CenterInstr>(&in)) {
    m.set_center(eval(i->x));
  } else if (const auto* i = std::get_if<IfInstr>(&in)) {
    if (eval(i->x) == eval(i->y)) {
      auto t = i->target.resolve(static_cast<std::int64_t>(line));
      if (t < 1 || t > static_cast<std::int64_t>(section.lines.size()))
        throw fail("jump outside section");
      return NextLine{static_cast<std::size_t>(t)};
    }
  } else {
    const auto& stop = std::get<StopInstr>(in);
    m.halt(stop.message);
    return Stopped{stop.message};
  }
  if (line == section.lines.size()) return SectionEnd{};
  return NextLine{line + 1};
}

SectionOutcome run_section(SmmMachine& m, const SmmProgram& p,
                           std::string_view name, std::uint64_t fuel) {
  const Section* section = p.find_section(name);
  if (!section)
    throw SmmRuntimeError("no section '" + std::string(name) + "'");
  SectionOutcome out;
  if (m.halted()) {
    out.status = SectionOutcome::Status::stopped;
    out.message = m.stop_message();
    return out;
  }
  if (section->lines.empty()) {
    if (name == "step") m.count_step();
    return out;
  }
  std::size_t line = 1;
  while (true) {
    if (out.instructions == fuel) {
      out.status = SectionOutcome::Status::fuel_exhausted;
      return out;
    }
    ++out.instructions;
    auto r = exec_instruction(m, p, *section, line);
    if (auto* next = std::get_if<NextLine>(&r)) {
      line = next->line;
    } else if (auto* stopped = std::get_if<Stopped>(&r)) {
      out.status = SectionOutcome::Status::stopped;
      out.message = stopped->message;
      return out;
    } else {
      if (name == "step") m.count_step();
      return out;
    }
  }
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const SmmMachine& m, const DotOptions& options) {
  std::ostringstream out;
  out << "digraph smm {\n";
  const auto center = m.center();
  for (NodeId n = 0; n < m.node_count(); ++n) {
    out << "  n" << n << " [label=\"" << n << ' ' << dot_escape(m.label(n))
        << '"';
    if (center && *center == n) out << ", style=filled, fillcolor=gray";
    out << "];\n";
  }
  for (NodeId n = 0; n < m.node_count(); ++n) {
    for (std::size_t d = 0; d < m.direction_count(); ++d) {
      const auto& name = m.directions()[d];
      if (options.omit_directions.contains(name)) continue;
      out << "  n" << n << " -> n"
          << m.target(n, Direction{static_cast<std::uint16_t>(d)})
          << " [label=\"" << dot_escape(name) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace tm2smm

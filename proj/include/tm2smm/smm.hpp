#pragma once

// Storage modification machine: a pointer graph whose nodes carry one
// outgoing edge per declared direction, a distinguished center node, and a
// five-instruction control language (new / set / center / if / stop).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tm2smm {

// Index into the owning program's direction list.
struct Direction {
  std::uint16_t index = 0;

  bool operator==(const Direction&) const = default;
  auto operator<=>(const Direction&) const = default;
};

// A direction string x; the empty path denotes the center.
struct Path {
  std::vector<Direction> steps;

  bool empty() const { return steps.empty(); }
  bool operator==(const Path&) const = default;
};

struct LineRef {
  enum class Kind { absolute, relative };
  Kind kind = Kind::absolute;
  std::int64_t value = 1;  // absolute: k >= 1; relative: +-k with k >= 1

  static LineRef absolute(std::int64_t k) { return {Kind::absolute, k}; }
  static LineRef relative(std::int64_t k) { return {Kind::relative, k}; }

  // 1-based target line when executed from `line`.
  std::int64_t resolve(std::int64_t line) const {
    return kind == Kind::absolute ? value : line + value;
  }
  bool operator==(const LineRef&) const = default;
};

struct NewInstr {
  std::string label;
  bool operator==(const NewInstr&) const = default;
};
struct SetInstr {
  Path x;
  Direction d;
  Path y;
  bool operator==(const SetInstr&) const = default;
};
struct CenterInstr {
  Path x;
  bool operator==(const CenterInstr&) const = default;
};
struct IfInstr {
  Path x;
  Path y;
  LineRef target;
  bool operator==(const IfInstr&) const = default;
};
struct StopInstr {
  std::string message;
  bool operator==(const StopInstr&) const = default;
};

using Instruction =
    std::variant<NewInstr, SetInstr, CenterInstr, IfInstr, StopInstr>;

struct Line {
  Instruction instr;
  std::string comment;  // trailing `;` comment, no semantics
  bool operator==(const Line&) const = default;
};

struct Section {
  std::string name;
  std::vector<Line> lines;
  bool operator==(const Section&) const = default;
};

struct SmmProgram {
  std::vector<std::string> header;  // leading comment lines, without `;`
  std::vector<std::string> directions;
  std::vector<Section> sections;

  const Section* find_section(std::string_view name) const;
  std::optional<Direction> direction(std::string_view name) const;

  bool operator==(const SmmProgram&) const = default;
};

class ProgramError : public std::runtime_error {
 public:
  ProgramError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Checks direction declarations, direction uses, jump bounds and the
// required `prologue` and `step` sections. Throws ProgramError (line 0).
void validate(const SmmProgram& p);

SmmProgram parse_smm_program(std::string_view text);
std::string format_smm_program(const SmmProgram& p);
std::string format_path(const SmmProgram& p, const Path& x);
std::string format_instruction(const SmmProgram& p, const Instruction& in);

using NodeId = std::uint32_t;

class SmmRuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SmmMachine {
 public:
  explicit SmmMachine(std::vector<std::string> directions);

  const std::vector<std::string>& directions() const { return directions_; }
  std::size_t direction_count() const { return directions_.size(); }
  std::size_t node_count() const { return labels_.size(); }
  const std::string& label(NodeId n) const { return labels_.at(n); }
  std::optional<NodeId> center() const { return center_; }

  NodeId target(NodeId n, Direction d) const {
    return edges_[n * directions_.size() + d.index];
  }

  // p(x); std::nullopt when x names a direction the machine does not have.
  // Throws SmmRuntimeError when there is no center yet.
  std::optional<NodeId> resolve(const Path& x) const;

  // New: every edge of the fresh node targets the previous center, or the
  // node itself when the machine is empty. The fresh node becomes center.
  NodeId new_node(std::string label);
  void set_edge(NodeId n, Direction d, NodeId to);
  void set_center(NodeId n);

  bool halted() const { return halted_; }
  const std::string& stop_message() const { return stop_message_; }
  void halt(std::string message);

  std::uint64_t steps_executed() const { return steps_executed_; }
  void count_step() { ++steps_executed_; }

  bool operator==(const SmmMachine&) const = default;

 private:
  std::vector<std::string> directions_;
  std::vector<std::string> labels_;
  std::vector<NodeId> edges_;  // row-major: node * direction_count + dir
  std::optional<NodeId> center_;
  bool halted_ = false;
  std::string stop_message_;
  std::uint64_t steps_executed_ = 0;
};

struct NextLine {
  std::size_t line;
};
struct SectionEnd {};
struct Stopped {
  std::string message;
};
using ExecResult = std::variant<NextLine, SectionEnd, Stopped>;

// Executes line `line` (1-based) of `section`. Operands of `set` are both
// evaluated before the edge is redirected.
ExecResult exec_instruction(SmmMachine& m, const SmmProgram& p,
                            const Section& section, std::size_t line);

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

struct SectionOutcome {
  enum class Status { completed, stopped, fuel_exhausted };
  Status status = Status::completed;
  std::string message;  // stop message when stopped
  std::uint64_t instructions = 0;
};

// Runs `name` from line 1 until it falls off the end, stops, or spends
// `fuel` instructions. A halted machine reports its recorded message again.
SectionOutcome run_section(SmmMachine& m, const SmmProgram& p,
                           std::string_view name,
                           std::uint64_t fuel = kDefaultFuel);

struct DotOptions {
  std::set<std::string> omit_directions;
};

std::string to_dot(const SmmMachine& m, const DotOptions& options = {});

}  // namespace tm2smm

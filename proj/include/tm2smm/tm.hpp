#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tm2smm {

enum class Move { left, right };

char move_char(Move m);

struct Transition {
  std::string write;
  Move move = Move::right;
  std::string next;

  bool operator==(const Transition&) const = default;
};

// A single-tape deterministic Turing machine. The blank is always alphabet[0];
// a missing (state, symbol) entry in the table means the machine halts there.
struct TuringMachine {
  std::vector<std::string> alphabet;
  std::string blank;
  std::vector<std::string> states;
  std::string start_state;
  std::map<std::pair<std::string, std::string>, Transition> table;

  std::optional<std::size_t> symbol_index(std::string_view symbol) const;
  std::optional<std::size_t> state_index(std::string_view state) const;

  bool operator==(const TuringMachine&) const = default;
};

struct TmConfiguration {
  std::vector<std::string> cells;
  std::size_t head = 0;
  std::string state;

  bool operator==(const TmConfiguration&) const = default;
};

// Machine plus the initial configuration declared in a spec file.
struct TmSpec {
  TuringMachine machine;
  TmConfiguration initial;

  bool operator==(const TmSpec&) const = default;
};

class SpecError : public std::runtime_error {
 public:
  SpecError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Throws std::invalid_argument when the machine breaks one of its invariants.
void validate(const TuringMachine& m);
void validate(const TuringMachine& m, const TmConfiguration& c);

TmSpec parse_tm_spec(std::string_view text);
std::string format_tm_spec(const TmSpec& spec);

std::optional<Transition> lookup_transition(const TuringMachine& m,
                                            std::string_view state,
                                            std::string_view symbol);

// Applies one transition. std::nullopt means the machine halted: no rule
// exists for the current (state, symbol). Moving off either end of the
// represented segment appends a blank cell on that side.
std::optional<TmConfiguration> tm_step(const TuringMachine& m,
                                       const TmConfiguration& c);

enum class RunStatus { halted, budget_exhausted };

struct TmRun {
  std::vector<TmConfiguration> trace;  // trace[0] is the starting configuration
  RunStatus status = RunStatus::budget_exhausted;

  std::size_t steps() const { return trace.size() - 1; }
};

TmRun tm_run(const TuringMachine& m, const TmConfiguration& c,
             std::size_t max_steps);

}  // namespace tm2smm

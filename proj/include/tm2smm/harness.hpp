#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tm2smm/compiler.hpp"
#include "tm2smm/decoder.hpp"
#include "tm2smm/smm.hpp"
#include "tm2smm/tm.hpp"

namespace tm2smm {

// Owns a compiled program and the machine executing it, one TM transition
// per `step()` call.
class CompiledRun {
 public:
  explicit CompiledRun(SmmProgram program, std::uint64_t fuel = kDefaultFuel);

  SectionOutcome prologue();
  SectionOutcome step();

  DecodedConfiguration decode() const {
    return decode_configuration(machine_, plan_);
  }
  const SmmMachine& machine() const { return machine_; }
  const SmmProgram& program() const { return program_; }
  const EncodingPlan& plan() const { return plan_; }

 private:
  SmmProgram program_;
  EncodingPlan plan_;
  SmmMachine machine_;
  std::uint64_t fuel_;
};

struct DiffOptions {
  std::size_t steps = 1000;
  std::uint64_t fuel = kDefaultFuel;
  bool check_structure = false;
};

struct DiffReport {
  enum class Status { equivalent, diverged, both_halted, budget_exhausted };
  Status status = Status::equivalent;
  std::size_t steps_compared = 0;  // completed transitions checked
  std::optional<std::size_t> step;  // divergence or halting step
  std::optional<TmConfiguration> oracle;
  std::optional<TmConfiguration> decoded;
  std::string detail;
  std::vector<std::size_t> node_counts;  // index = step

  bool ok() const {
    return status == Status::equivalent || status == Status::both_halted;
  }
};

const char* to_string(DiffReport::Status s);

// Runs the oracle and the compiled program side by side, decoding after the
// prologue and after every step. Stops at the first mismatch in state, head,
// tape, node count, halting, or (optionally) graph shape.
DiffReport lockstep_diff(const TuringMachine& m, const TmConfiguration& c0,
                         const SmmProgram& program, const DiffOptions& opts);

struct RandomMachineLimits {
  std::size_t min_symbols = 2, max_symbols = 8;
  std::size_t min_states = 1, max_states = 6;
  double min_density = 0.5, max_density = 1.0;
  std::size_t max_tape = 6;
};

// Seeded machine and initial configuration. Symbols are `_` (blank) then
// s1, s2, ...; states are q0, q1, ...
TmSpec random_machine(std::uint64_t seed, const RandomMachineLimits& limits = {});

std::string tsv_header();
std::string tsv_row(std::size_t step, const TmConfiguration& c);

}  // namespace tm2smm

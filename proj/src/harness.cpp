#include "tm2smm/harness.hpp"

#include <random>
#include <sstream>

#include "text_util.hpp"

namespace tm2smm {

CompiledRun::CompiledRun(SmmProgram program, std::uint64_t fuel)
    : program_(std::move(program)),
      plan_(read_plan(program_)),
      machine_(program_.directions),
      fuel_(fuel) {}

SectionOutcome CompiledRun::prologue() {
  return run_section(machine_, program_, "prologue", fuel_);
}

SectionOutcome CompiledRun::step() {
  return run_section(machine_, program_, "step", fuel_);
}

const char* to_string(DiffReport::Status s) {
  switch (s) {
    case DiffReport::Status::equivalent: return "equivalent";
    case DiffReport::Status::diverged: return "diverged";
    case DiffReport::Status::both_halted: return "both-halted";
    case DiffReport::Status::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

DiffReport lockstep_diff(const TuringMachine& m, const TmConfiguration& c0,
                         const SmmProgram& program, const DiffOptions& opts) {
  DiffReport report;
  auto diverge = [&](std::size_t step, std::string detail,
                     std::optional<TmConfiguration> oracle,
                     std::optional<TmConfiguration> decoded) {
    report.status = DiffReport::Status::diverged;
    report.step = step;
    report.detail = std::move(detail);
    report.oracle = std::move(oracle);
    report.decoded = std::move(decoded);
    return report;
  };

  CompiledRun run(program, opts.fuel);
  TmConfiguration oracle = c0;

  // Compares the machine against the current oracle configuration.
  auto compare = [&]() -> std::optional<std::string> {
    const auto& machine = run.machine();
    report.node_counts.push_back(machine.node_count());
    DecodedConfiguration d;
    try {
      d = run.decode();
    } catch (const DecodeError& e) {
      return std::string("decode failed: ") + e.what();
    }
    if (d.config != oracle) {
      report.decoded = d.config;
      return std::string("decoded configuration differs");
    }
    if (machine.node_count() != 2 * d.config.cells.size() + 1)
      return "node count " + std::to_string(machine.node_count()) +
             " != 2*" + std::to_string(d.config.cells.size()) + "+1";
    if (opts.check_structure) {
      auto bad = check_structure(machine, run.plan());
      if (!bad.empty()) return "graph shape: " + bad.front();
    }
    return std::nullopt;
  };

  try {
    auto pro = run.prologue();
    if (pro.status == SectionOutcome::Status::fuel_exhausted) {
      report.status = DiffReport::Status::budget_exhausted;
      report.step = 0;
      report.detail = "prologue ran out of fuel";
      return report;
    }
    if (pro.status == SectionOutcome::Status::stopped)
      return diverge(0, "prologue stopped: " + pro.message, oracle, {});
    if (auto why = compare())
      return diverge(0, *why, oracle, report.decoded);

    for (std::size_t t = 1; t <= opts.steps; ++t) {
      auto next = tm_step(m, oracle);
      auto out = run.step();
      if (out.status == SectionOutcome::Status::fuel_exhausted) {
        report.status = DiffReport::Status::budget_exhausted;
        report.step = t;
        report.detail = "step section ran out of fuel";
        return report;
      }
      const bool smm_stopped = out.status == SectionOutcome::Status::stopped;
      if (!next && smm_stopped) {
        report.status = DiffReport::Status::both_halted;
        report.step = t - 1;
        report.detail = out.message;
        return report;
      }
      if (!next)
        return diverge(t, "oracle halted but the SMM step completed", oracle,
                       {});
      if (smm_stopped)
        return diverge(t, "SMM stopped (" + out.message +
                              ") but the oracle continued",
                       *next, {});
      oracle = std::move(*next);
      if (auto why = compare())
        return diverge(t, *why, oracle, report.decoded);
      report.steps_compared = t;
    }
  } catch (const SmmRuntimeError& e) {
    return diverge(report.steps_compared + 1,
                   std::string("runtime error: ") + e.what(), oracle, {});
  }
  report.status = DiffReport::Status::equivalent;
  return report;
}

TmSpec random_machine(std::uint64_t seed, const RandomMachineLimits& limits) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  TmSpec spec;
  auto& m = spec.machine;
  const auto symbols = pick(limits.min_symbols, limits.max_symbols);
  const auto states = pick(limits.min_states, limits.max_states);
  m.alphabet.push_back("_");
  for (std::size_t i = 1; i < symbols; ++i)
    m.alphabet.push_back("s" + std::to_string(i));
  m.blank = "_";
  for (std::size_t i = 0; i < states; ++i)
    m.states.push_back("q" + std::to_string(i));
  m.start_state = m.states.front();

  const double density = std::uniform_real_distribution<double>(
      limits.min_density, limits.max_density)(rng);
  std::bernoulli_distribution keep(density);
  for (const auto& s : m.states) {
    for (const auto& sym : m.alphabet) {
      if (!keep(rng)) continue;
      Transition t{m.alphabet[pick(0, symbols - 1)],
                   pick(0, 1) ? Move::right : Move::left,
                   m.states[pick(0, states - 1)]};
      m.table.emplace(std::pair{s, sym}, t);
    }
  }

  const auto len = pick(1, std::max<std::size_t>(1, limits.max_tape));
  for (std::size_t i = 0; i < len; ++i)
    spec.initial.cells.push_back(m.alphabet[pick(0, symbols - 1)]);
  spec.initial.head = pick(0, len - 1);
  spec.initial.state = m.start_state;
  return spec;
}

std::string tsv_header() { return "step\tstate\thead\ttape"; }

std::string tsv_row(std::size_t step, const TmConfiguration& c) {
  std::ostringstream out;
  out << step << '\t' << c.state << '\t' << c.head << '\t' << join(c.cells, " ");
  return out.str();
}

}  // namespace tm2smm

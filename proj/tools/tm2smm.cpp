#include <iostream>

#include "CLI11.hpp"
#include "tm2smm/cli.hpp"

int main(int argc, char** argv) {
  using namespace tm2smm::cli;
  CLI::App app{"Compile Turing machines to storage modification machines, run "
               "both, and compare them step by step"};
  app.require_subcommand(1);
  Io io{std::cout, std::cerr};
  int status = kOk;

  std::string spec_path, out_path;
  auto* compile = app.add_subcommand("compile", "Compile a TM spec to an SMM program");
  compile->add_option("--spec", spec_path, "TM spec file")->required();
  compile->add_option("-o,--out", out_path, "Output program file")->required();
  compile->callback([&] { status = cmd_compile(spec_path, out_path, io); });

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a compiled program and decode every step");
  run->add_option("--program", run_opts.program_path, "SMM program file")->required();
  run->add_option("--steps", run_opts.steps, "Step sections to run after the prologue");
  run->add_option("--dot-every", run_opts.dot_every, "Write a DOT snapshot every K steps (0: never)");
  run->add_option("--dot-dir", run_opts.dot_dir, "Directory for DOT snapshots");
  run->add_option("--trace", run_opts.trace_path, "TSV trace file (default: stdout)");
  run->add_option("--fuel", run_opts.fuel, "Instruction budget per section run");
  run->add_flag("--all-directions", run_opts.show_all_directions, "Keep o and bit edges in DOT output");
  run->callback([&] { status = cmd_run(run_opts, io); });

  std::string oracle_spec, oracle_trace;
  std::size_t oracle_steps = 12;
  auto* oracle = app.add_subcommand("oracle", "Run the TM interpreter directly");
  oracle->add_option("--spec", oracle_spec, "TM spec file")->required();
  oracle->add_option("--steps", oracle_steps, "Maximum transitions");
  oracle->add_option("--trace", oracle_trace, "TSV trace file (default: stdout)");
  oracle->callback([&] { status = cmd_oracle(oracle_spec, oracle_steps, oracle_trace, io); });

  DiffCliOptions diff_opts;
  auto* diff = app.add_subcommand("diff", "Lockstep-compare the TM and its compiled SMM");
  diff->add_option("--spec", diff_opts.spec_path, "TM spec file")->required();
  diff->add_option("--program", diff_opts.program_path, "Compare against this program instead of compiling");
  diff->add_option("--steps", diff_opts.steps, "Transitions to compare");
  diff->add_option("--fuel", diff_opts.fuel, "Instruction budget per section run");
  diff->add_flag("--check-structure", diff_opts.check_structure, "Validate the graph shape after every step");
  diff->add_option("--report", diff_opts.report_path, "Write a JSON report");
  diff->callback([&] { status = cmd_diff(diff_opts, io); });

  ReadoutOptions readout_opts;
  auto* readout = app.add_subcommand("readout", "Print tape values at readout configurations");
  readout->add_option("--spec", readout_opts.spec_path, "TM spec file")->required();
  readout->add_option("--steps", readout_opts.steps, "Transitions to run");
  readout->add_option("--state", readout_opts.state, "State at readout")->required();
  readout->add_option("--symbol", readout_opts.symbol, "Symbol under the leftmost head")->required();
  readout->add_option("--base", readout_opts.base, "Numeral base")->check(CLI::Range(2, 36));
  readout->add_option("--fuel", readout_opts.fuel, "Instruction budget per section run");
  readout->callback([&] { status = cmd_readout(readout_opts, io); });

  DotCliOptions dot_opts;
  auto* dot = app.add_subcommand("dot", "Dump one DOT snapshot after N steps");
  dot->add_option("--program", dot_opts.program_path, "SMM program file")->required();
  dot->add_option("--steps", dot_opts.steps, "Steps to run before the snapshot");
  dot->add_option("-o,--out", dot_opts.out_path, "Output file (default: stdout)");
  dot->add_option("--fuel", dot_opts.fuel, "Instruction budget per section run");
  dot->add_flag("--all-directions", dot_opts.show_all_directions, "Keep o and bit edges");
  dot->callback([&] { status = cmd_dot(dot_opts, io); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  return status;
}

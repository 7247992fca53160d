#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dot_check.hpp"
#include "test_support.hpp"
#include "tm2smm/cli.hpp"
#include "tm2smm/harness.hpp"

using namespace tm2smm;
using tm2smm::testing::collatz;
using tm2smm::testing::data_path;
using tm2smm::testing::read_text;

namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("tm2smm_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::size_t count_rows(const std::string& tsv) {
  std::istringstream in(tsv);
  std::string line;
  std::size_t n = 0;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

struct Captured {
  std::ostringstream out, err;
  cli::Io io() { return {out, err}; }
};

const char* kStopsAtFive =
    "symbols _ x y\nstates A\nstart A\nrule A _ x R A\ntape _ _ _ _ _ y\n";

}  // namespace

TEST(LockstepDiff, CollatzEquivalent) {
  auto spec = collatz();
  auto program = compile(spec.machine, spec.initial).program;
  auto report = lockstep_diff(spec.machine, spec.initial, program,
                              {2000, kDefaultFuel, true});
  EXPECT_EQ(report.status, DiffReport::Status::equivalent);
  EXPECT_EQ(report.steps_compared, 2000u);
  ASSERT_EQ(report.node_counts.size(), 2001u);
}

TEST(LockstepDiff, RandomSmallMachines) {
  RandomMachineLimits small;
  small.max_symbols = 2;
  small.max_states = 2;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto spec = random_machine(seed, small);
    auto program = compile(spec.machine, spec.initial).program;
    auto report = lockstep_diff(spec.machine, spec.initial, program,
                                {300, kDefaultFuel, true});
    ASSERT_TRUE(report.ok()) << "seed " << seed << ": " << report.detail;
  }
}

TEST(LockstepDiff, HaltingMachineBothHalt) {
  auto spec = parse_tm_spec(kStopsAtFive);
  auto program = compile(spec.machine, spec.initial).program;
  auto report = lockstep_diff(spec.machine, spec.initial, program, {100});
  EXPECT_EQ(report.status, DiffReport::Status::both_halted);
  EXPECT_EQ(report.step, 5u);
}

// A corrupted `set` target must be caught.
TEST(LockstepDiff, MutatedProgramDiverges) {
  auto spec = collatz();
  auto program = compile(spec.machine, spec.initial).program;
  auto& step = program.sections.at(1).lines;
  bool mutated = false;
  for (auto& line : step) {
    if (auto* s = std::get_if<SetInstr>(&line.instr)) {
      if (s->d == kE || s->d == kW) continue;
      // redirect the first bit write on f to the opposite value
      if (s->x.steps == std::vector<Direction>{kF} && s->d.index >= 4) {
        s->y = s->y.steps.empty() ? Path{{kO}} : Path{};
        mutated = true;
        break;
      }
    }
  }
  ASSERT_TRUE(mutated);
  auto report = lockstep_diff(spec.machine, spec.initial, program, {500});
  EXPECT_EQ(report.status, DiffReport::Status::diverged);
  EXPECT_TRUE(report.step.has_value());
}

TEST(LockstepDiff, ProgramForAnotherMachineDiverges) {
  auto spec = collatz();
  auto other = collatz();
  other.initial.cells = {"1"};
  auto program = compile(other.machine, other.initial).program;
  auto report = lockstep_diff(spec.machine, spec.initial, program, {10});
  EXPECT_EQ(report.status, DiffReport::Status::diverged);
  EXPECT_EQ(report.step, 0u);
}

TEST(RandomMachine, SeededAndWithinLimits) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto a = random_machine(seed);
    EXPECT_EQ(a, random_machine(seed));
    EXPECT_GE(a.machine.alphabet.size(), 2u);
    EXPECT_LE(a.machine.alphabet.size(), 8u);
    EXPECT_GE(a.machine.states.size(), 1u);
    EXPECT_LE(a.machine.states.size(), 6u);
    EXPECT_LE(a.initial.cells.size(), 6u);
    EXPECT_NO_THROW(validate(a.machine, a.initial));
  }
  EXPECT_NE(random_machine(1), random_machine(2));
}

TEST(Tsv, Rows) {
  EXPECT_EQ(tsv_header(), "step\tstate\thead\ttape");
  EXPECT_EQ(tsv_row(7, tm2smm::testing::config("C", {"b", "1", "0", "0", "2"}, 0)),
            "7\tC\t0\tb 1 0 0 2");
}

TEST(CliCompile, DeterministicOutput) {
  TempDir dir;
  Captured c;
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("a.smm"), c.io()), 0);
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("b.smm"), c.io()), 0);
  EXPECT_EQ(read_text(dir.file("a.smm")), read_text(dir.file("b.smm")));
  EXPECT_NE(c.out.str().find("directions: 6"), std::string::npos);
}

TEST(CliCompile, MalformedSpec) {
  TempDir dir;
  write(dir.file("bad.tm"), "symbols b 0\nstates A\nstart A\nrule A x -> x R A\n");
  Captured c;
  EXPECT_EQ(cli::cmd_compile(dir.file("bad.tm"), dir.file("out.smm"), c.io()), 1);
  EXPECT_FALSE(fs::exists(dir.file("out.smm")));
  EXPECT_NE(c.err.str().find("line 4"), std::string::npos) << c.err.str();
  EXPECT_NE(c.err.str().find("'x'"), std::string::npos);
}

TEST(CliRun, TraceAndSnapshots) {
  TempDir dir;
  Captured c;
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("c.smm"), c.io()), 0);
  cli::RunOptions opts;
  opts.program_path = dir.file("c.smm");
  opts.steps = 12;
  opts.dot_every = 1;
  opts.dot_dir = dir.file("dots");
  opts.trace_path = dir.file("trace.tsv");
  ASSERT_EQ(cli::cmd_run(opts, c.io()), 0) << c.err.str();
  const auto trace = read_text(opts.trace_path);
  EXPECT_EQ(count_rows(trace), 13u);
  EXPECT_NE(trace.find("7\tC\t0\tb 1 0 0 2"), std::string::npos);

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(opts.dot_dir)) {
    ++files;
    tm2smm::testing::DotChecker check(read_text(entry.path().string()));
    EXPECT_EQ(check.check(), "") << entry.path();
  }
  EXPECT_EQ(files, 13u);
  EXPECT_TRUE(fs::exists(dir.file("dots/step_00012.dot")));

  // the oracle trace is identical
  Captured o;
  ASSERT_EQ(cli::cmd_oracle(data_path("collatz34.tm"), 12, dir.file("oracle.tsv"), o.io()), 0);
  EXPECT_EQ(read_text(dir.file("oracle.tsv")), trace);
}

TEST(CliRun, ZeroSteps) {
  TempDir dir;
  Captured c;
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("c.smm"), c.io()), 0);
  cli::RunOptions opts;
  opts.program_path = dir.file("c.smm");
  opts.steps = 0;
  Captured r;
  ASSERT_EQ(cli::cmd_run(opts, r.io()), 0);
  EXPECT_EQ(count_rows(r.out.str()), 1u);
}

TEST(CliRun, StopsEarly) {
  TempDir dir;
  write(dir.file("five.tm"), kStopsAtFive);
  Captured c;
  ASSERT_EQ(cli::cmd_compile(dir.file("five.tm"), dir.file("five.smm"), c.io()), 0);
  cli::RunOptions opts;
  opts.program_path = dir.file("five.smm");
  opts.steps = 50;
  Captured r;
  ASSERT_EQ(cli::cmd_run(opts, r.io()), 0);
  EXPECT_EQ(count_rows(r.out.str()), 6u);
  EXPECT_NE(r.err.str().find("stopped at step 5"), std::string::npos) << r.err.str();
}

TEST(CliRun, FuelExhausted) {
  TempDir dir;
  Captured c;
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("c.smm"), c.io()), 0);
  cli::RunOptions opts;
  opts.program_path = dir.file("c.smm");
  opts.fuel = 3;
  Captured r;
  EXPECT_EQ(cli::cmd_run(opts, r.io()), 3);
}

TEST(CliRun, MissingProgram) {
  cli::RunOptions opts;
  opts.program_path = "/nonexistent/program.smm";
  Captured r;
  EXPECT_EQ(cli::cmd_run(opts, r.io()), 1);
  EXPECT_FALSE(r.err.str().empty());
}

TEST(CliRun, EmptyTableHaltsAtStepZero) {
  TempDir dir;
  write(dir.file("empty.tm"), "symbols b\nstates A\nstart A\ntape b\n");
  Captured c;
  ASSERT_EQ(cli::cmd_compile(dir.file("empty.tm"), dir.file("empty.smm"), c.io()), 0);
  cli::RunOptions opts;
  opts.program_path = dir.file("empty.smm");
  Captured r;
  ASSERT_EQ(cli::cmd_run(opts, r.io()), 0);
  EXPECT_EQ(count_rows(r.out.str()), 1u);
  EXPECT_NE(r.err.str().find("stopped at step 0"), std::string::npos);
}

TEST(CliDiff, ExitCodesAndReport) {
  TempDir dir;
  cli::DiffCliOptions opts;
  opts.spec_path = data_path("collatz34.tm");
  opts.steps = 500;
  opts.check_structure = true;
  opts.report_path = dir.file("report.json");
  Captured c;
  EXPECT_EQ(cli::cmd_diff(opts, c.io()), 0);
  EXPECT_NE(read_text(opts.report_path).find("\"equivalent\""), std::string::npos);

  // against a program compiled from another initial tape
  auto other = read_text(data_path("collatz34.tm"));
  other.replace(other.find("tape 2 0 1"), 10, "tape 1");
  write(dir.file("other.tm"), other);
  Captured k;
  ASSERT_EQ(cli::cmd_compile(dir.file("other.tm"), dir.file("other.smm"), k.io()), 0)
      << k.err.str();
  opts.program_path = dir.file("other.smm");
  Captured d;
  EXPECT_EQ(cli::cmd_diff(opts, d.io()), 2);
}

TEST(CliReadout, CollatzValues) {
  cli::ReadoutOptions opts;
  opts.spec_path = data_path("collatz34.tm");
  opts.steps = 7;
  opts.state = "C";
  opts.symbol = "b";
  opts.base = 3;
  Captured c;
  ASSERT_EQ(cli::cmd_readout(opts, c.io()), 0) << c.err.str();
  EXPECT_EQ(c.out.str(), "7 29\n");

  opts.state = "A";
  opts.steps = 200;
  Captured none;
  ASSERT_EQ(cli::cmd_readout(opts, none.io()), 0);
  EXPECT_EQ(none.out.str(), "");

  opts.state = "Z";
  Captured bad;
  EXPECT_EQ(cli::cmd_readout(opts, bad.io()), 1);
}

TEST(CliDot, PostPrologueSnapshot) {
  TempDir dir;
  Captured c;
  ASSERT_EQ(cli::cmd_compile(data_path("collatz34.tm"), dir.file("c.smm"), c.io()), 0);
  cli::DotCliOptions opts;
  opts.program_path = dir.file("c.smm");
  Captured d;
  ASSERT_EQ(cli::cmd_dot(opts, d.io()), 0);
  tm2smm::testing::DotChecker check(d.out.str());
  ASSERT_EQ(check.check(), "");
  EXPECT_EQ(check.nodes, 7u);
  EXPECT_EQ(check.edges, 21u);
}

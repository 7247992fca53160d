#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "tm2smm/smm.hpp"

namespace tm2smm::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kDiverged = 2,
  kFuelExhausted = 3,
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

int cmd_compile(const std::string& spec_path, const std::string& out_path,
                Io io);

struct RunOptions {
  std::string program_path;
  std::size_t steps = 12;
  std::size_t dot_every = 0;  // 0: no snapshots
  std::string dot_dir = ".";
  std::string trace_path;     // empty: standard output
  std::uint64_t fuel = kDefaultFuel;
  bool show_all_directions = false;
};

int cmd_run(const RunOptions& opts, Io io);

int cmd_oracle(const std::string& spec_path, std::size_t steps,
               const std::string& trace_path, Io io);

struct DiffCliOptions {
  std::string spec_path;
  std::string program_path;  // optional: diff against this program instead
  std::size_t steps = 1000;
  std::uint64_t fuel = kDefaultFuel;
  bool check_structure = false;
  std::string report_path;   // JSON report
};

int cmd_diff(const DiffCliOptions& opts, Io io);

struct ReadoutOptions {
  std::string spec_path;
  std::size_t steps = 1000;
  std::string state;
  std::string symbol;
  unsigned base = 10;
  std::uint64_t fuel = kDefaultFuel;
};

int cmd_readout(const ReadoutOptions& opts, Io io);

struct DotCliOptions {
  std::string program_path;
  std::size_t steps = 0;
  std::string out_path;  // empty: standard output
  std::uint64_t fuel = kDefaultFuel;
  bool show_all_directions = false;
};

int cmd_dot(const DotCliOptions& opts, Io io);

}  // namespace tm2smm::cli

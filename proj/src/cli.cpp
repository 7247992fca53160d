#include "tm2smm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "tm2smm/compiler.hpp"
#include "tm2smm/decoder.hpp"
#include "tm2smm/harness.hpp"
#include "tm2smm/tm.hpp"

namespace tm2smm::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

TmSpec load_spec(const std::string& path) {
  auto spec = parse_tm_spec(read_file(path));
  validate(spec.machine, spec.initial);
  return spec;
}

DotOptions dot_options(const EncodingPlan& plan, bool show_all) {
  DotOptions o;
  if (show_all) return o;
  o.omit_directions.insert("o");
  for (std::size_t j = 0; j < plan.k; ++j)
    o.omit_directions.insert("b" + std::to_string(j));
  return o;
}

std::string snapshot_name(const std::string& dir, std::size_t step) {
  std::ostringstream name;
  name << "step_" << std::setw(5) << std::setfill('0') << step << ".dot";
  return (std::filesystem::path(dir) / name.str()).string();
}

// Routes trace rows to a file or to the given stream.
class TraceSink {
 public:
  TraceSink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
      out_ = &file_;
    }
    *out_ << tsv_header() << '\n';
  }
  void row(std::size_t step, const TmConfiguration& c) {
    *out_ << tsv_row(step, c) << '\n';
  }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

template <class F>
int guarded(Io io, F&& body) {
  try {
    return body();
  } catch (const SmmRuntimeError& e) {
    io.err << "runtime error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

int cmd_compile(const std::string& spec_path, const std::string& out_path,
                Io io) {
  return guarded(io, [&] {
    auto spec = load_spec(spec_path);
    auto compiled = compile(spec.machine, spec.initial);
    write_file(out_path, format_smm_program(compiled.program));
    io.out << "directions: " << compiled.program.directions.size() << '\n';
    io.out << "symbol bits: " << compiled.plan.n
           << ", state bits: " << compiled.plan.m << '\n';
    for (const auto& s : compiled.program.sections)
      io.out << s.name << ": " << s.lines.size() << " lines\n";
    return kOk;
  });
}

int cmd_run(const RunOptions& opts, Io io) {
  return guarded(io, [&] {
    CompiledRun run(parse_smm_program(read_file(opts.program_path)), opts.fuel);
    TraceSink trace(opts.trace_path, io.out);
    std::ostream& status = trace.to_file() ? io.out : io.err;
    const auto dot = dot_options(run.plan(), opts.show_all_directions);
    if (opts.dot_every) std::filesystem::create_directories(opts.dot_dir);

    auto record = [&](std::size_t t) {
      trace.row(t, run.decode().config);
      if (opts.dot_every && t % opts.dot_every == 0)
        write_file(snapshot_name(opts.dot_dir, t), to_dot(run.machine(), dot));
    };

    auto outcome = run.prologue();
    for (std::size_t t = 0;; ++t) {
      if (outcome.status == SectionOutcome::Status::fuel_exhausted) {
        io.err << (t == 0 ? "prologue" : "step " + std::to_string(t))
               << " exhausted its fuel of " << opts.fuel << " instructions\n";
        return kFuelExhausted;
      }
      if (outcome.status == SectionOutcome::Status::stopped) {
        if (t == 0)
          status << "prologue stopped: ";
        else
          status << "stopped at step " << t - 1 << ": ";
        status << outcome.message << '\n';
        return kOk;
      }
      record(t);
      if (t == opts.steps) break;
      outcome = run.step();
    }
    status << "completed " << opts.steps << " steps, "
           << run.machine().node_count() << " nodes\n";
    return kOk;
  });
}

int cmd_oracle(const std::string& spec_path, std::size_t steps,
               const std::string& trace_path, Io io) {
  return guarded(io, [&] {
    auto spec = load_spec(spec_path);
    auto result = tm_run(spec.machine, spec.initial, steps);
    TraceSink trace(trace_path, io.out);
    std::ostream& status = trace.to_file() ? io.out : io.err;
    for (std::size_t t = 0; t < result.trace.size(); ++t)
      trace.row(t, result.trace[t]);
    if (result.status == RunStatus::halted)
      status << "halted at step " << result.steps() << '\n';
    else
      status << "budget exhausted after " << result.steps() << " steps\n";
    return kOk;
  });
}

int cmd_diff(const DiffCliOptions& opts, Io io) {
  return guarded(io, [&] {
    auto spec = load_spec(opts.spec_path);
    auto program =
        opts.program_path.empty()
            ? compile(spec.machine, spec.initial).program
            : parse_smm_program(read_file(opts.program_path));
    DiffOptions d{opts.steps, opts.fuel, opts.check_structure};
    auto report = lockstep_diff(spec.machine, spec.initial, program, d);

    io.out << "status: " << to_string(report.status) << '\n';
    io.out << "steps compared: " << report.steps_compared << '\n';
    if (report.step) io.out << "at step: " << *report.step << '\n';
    if (!report.detail.empty()) io.out << "detail: " << report.detail << '\n';
    if (report.status == DiffReport::Status::diverged) {
      if (report.oracle) io.out << "oracle:  " << tsv_row(*report.step, *report.oracle) << '\n';
      if (report.decoded) io.out << "decoded: " << tsv_row(*report.step, *report.decoded) << '\n';
    }
    if (!report.node_counts.empty())
      io.out << "final node count: " << report.node_counts.back() << '\n';

    if (!opts.report_path.empty()) {
      nlohmann::json j;
      j["status"] = to_string(report.status);
      j["steps_compared"] = report.steps_compared;
      if (report.step) j["step"] = *report.step;
      j["detail"] = report.detail;
      j["node_counts"] = report.node_counts;
      auto config = [](const TmConfiguration& c) {
        return nlohmann::json{{"state", c.state}, {"head", c.head}, {"cells", c.cells}};
      };
      if (report.oracle) j["oracle"] = config(*report.oracle);
      if (report.decoded) j["decoded"] = config(*report.decoded);
      write_file(opts.report_path, j.dump(2) + "\n");
    }

    switch (report.status) {
      case DiffReport::Status::equivalent:
      case DiffReport::Status::both_halted: return kOk;
      case DiffReport::Status::diverged: return kDiverged;
      case DiffReport::Status::budget_exhausted: return kFuelExhausted;
    }
    return kDiverged;
  });
}

int cmd_readout(const ReadoutOptions& opts, Io io) {
  return guarded(io, [&] {
    auto spec = load_spec(opts.spec_path);
    const auto& m = spec.machine;
    if (!m.state_index(opts.state))
      throw std::invalid_argument("undeclared state '" + opts.state + "'");
    if (!m.symbol_index(opts.symbol))
      throw std::invalid_argument("undeclared symbol '" + opts.symbol + "'");
    const ReadoutPredicate pred{opts.state, opts.symbol, opts.base};

    CompiledRun run(compile(m, spec.initial).program, opts.fuel);
    auto outcome = run.prologue();
    for (std::size_t t = 0;; ++t) {
      if (outcome.status == SectionOutcome::Status::fuel_exhausted) {
        io.err << "fuel exhausted at step " << t << '\n';
        return kFuelExhausted;
      }
      if (outcome.status == SectionOutcome::Status::stopped) {
        if (t == 0)
          io.err << "prologue stopped: ";
        else
          io.err << "stopped at step " << t - 1 << ": ";
        io.err << outcome.message << '\n';
        return kOk;
      }
      if (auto v = readout_value(run.decode().config, m.blank, pred))
        io.out << t << ' ' << *v << '\n';
      if (t == opts.steps) break;
      outcome = run.step();
    }
    return kOk;
  });
}

int cmd_dot(const DotCliOptions& opts, Io io) {
  return guarded(io, [&] {
    CompiledRun run(parse_smm_program(read_file(opts.program_path)), opts.fuel);
    auto outcome = run.prologue();
    std::size_t t = 0;
    while (outcome.status == SectionOutcome::Status::completed &&
           t < opts.steps) {
      outcome = run.step();
      if (outcome.status == SectionOutcome::Status::completed) ++t;
    }
    if (outcome.status == SectionOutcome::Status::fuel_exhausted) {
      io.err << "fuel exhausted after step " << t << '\n';
      return kFuelExhausted;
    }
    if (outcome.status == SectionOutcome::Status::stopped)
      io.err << "stopped after step " << t << ": " << outcome.message << '\n';
    auto text = to_dot(run.machine(), dot_options(run.plan(), opts.show_all_directions));
    if (opts.out_path.empty())
      io.out << text;
    else
      write_file(opts.out_path, text);
    return kOk;
  });
}

}  // namespace tm2smm::cli

// snpsim: command-line front end for the SN P simulator.
//
// Exit codes: 0 ok, 1 parse/validation/IO/usage, 2 runtime error,
// 3 exploration bound exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "snp/devices.hpp"
#include "snp/engine.hpp"
#include "snp/error.hpp"
#include "snp/lang.hpp"
#include "snp/snpos.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kRuntime = 2, kBound = 3 };

// Usage problems that CLI11 cannot see (dynamic --inN flags, device args).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

snp::System load_system(const std::string& path, std::optional<snp::Mode> mode = {}) {
  const std::string text = read_file(path);
  try {
    snp::SystemDef def = snp::parse_system_def(text);
    if (mode) def.mode = *mode;
    return snp::validate_system(std::move(def));
  } catch (const snp::ParseError& e) {
    throw snp::ParseError(path + ":" + e.what(), 0, 0);
  } catch (const snp::Error& e) {
    throw snp::ValidationError(path + ": " + e.what());
  }
}

std::uint64_t to_number(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw UsageError("invalid " + what + " '" + s + "'");
  }
  return v;
}

// `0110` is one spike per character; `0,3,1` is a list of counts.
snp::SpikeTrain parse_train(const std::string& text) {
  snp::SpikeTrain train;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) train.push_back(to_number(item, "spike count"));
    return train;
  }
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw UsageError("invalid input train '" + text +
                       "' (use 0/1 characters or comma-separated counts)");
    }
    train.push_back(c == '1' ? 1 : 0);
  }
  return train;
}

// Collects `--inN <train>` / `--inN=<train>` from arguments CLI11 left over.
std::vector<snp::SpikeTrain> input_trains(const std::vector<std::string>& extras,
                                          std::size_t input_count) {
  std::map<std::size_t, snp::SpikeTrain> by_index;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--in", 0) != 0) throw UsageError("unexpected argument '" + arg + "'");
    std::string rest = arg.substr(4);
    std::string value;
    if (auto eq = rest.find('='); eq != std::string::npos) {
      value = rest.substr(eq + 1);
      rest = rest.substr(0, eq);
    } else {
      if (i + 1 == extras.size()) throw UsageError(arg + " needs a value");
      value = extras[++i];
    }
    const std::uint64_t k = to_number(rest, "input flag '" + arg + "'");
    if (k == 0 || k > input_count) {
      throw UsageError(arg + ": system has " + std::to_string(input_count) + " input neuron(s)");
    }
    if (!by_index.emplace(k, parse_train(value)).second) throw UsageError(arg + " given twice");
  }
  std::vector<snp::SpikeTrain> trains(by_index.empty() ? 0 : by_index.rbegin()->first);
  for (auto& [k, t] : by_index) trains[k - 1] = std::move(t);
  return trains;
}

std::string join(const snp::SpikeTrain& train, const char* empty = "") {
  if (train.empty()) return empty;
  std::string out;
  for (std::size_t i = 0; i < train.size(); ++i) out += (i ? "," : "") + std::to_string(train[i]);
  return out;
}

std::optional<snp::Mode> mode_override(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto m = snp::parse_mode(text);
  if (!m) throw UsageError("unknown mode '" + text + "'");
  return m;
}

void print_warnings(const snp::System& sys) {
  for (const auto& w : sys.warnings()) std::cerr << "warning: " << w << '\n';
}

int cmd_check(const std::string& file) {
  auto sys = load_system(file);
  print_warnings(sys);
  std::size_t rules = 0;
  for (std::size_t i = 0; i < sys.size(); ++i) rules += sys.neuron(i).rules.size();
  std::cout << "ok " << sys.def().name << ": " << sys.size() << " neurons, "
            << sys.def().synapses.size() << " synapses, " << rules << " rules, "
            << snp::to_string(sys.mode()) << ", " << (sys.classic() ? "classic" : "extended")
            << '\n';
  return kOk;
}

struct RunOptions {
  std::string file;
  std::int64_t steps = 100;
  std::optional<std::uint64_t> seed;
  std::string chooser;  // empty: seeded when --seed is given, else first
  bool trace = false;
  std::string mode;
};

int cmd_run(const RunOptions& o, const std::vector<std::string>& extras) {
  auto sys = load_system(o.file, mode_override(o.mode));
  print_warnings(sys);
  auto trains = input_trains(extras, sys.inputs().size());

  // --seed alone selects the seeded chooser.
  const std::string kind = o.chooser.empty() ? (o.seed ? "seeded" : "first") : o.chooser;
  std::unique_ptr<snp::Chooser> chooser;
  if (kind == "seeded") {
    if (!o.seed) throw UsageError("--chooser seeded requires --seed");
    chooser = std::make_unique<snp::SeededUniformChooser>(*o.seed);
  } else if (kind == "first") {
    if (o.seed) throw UsageError("--seed only applies to --chooser seeded");
    chooser = std::make_unique<snp::FirstDeclaredChooser>();
  } else {
    throw UsageError("unknown chooser '" + kind + "'");
  }

  auto r = snp::run(sys, trains, o.steps, *chooser);
  std::cout << "output: " << join(r.output_train) << '\n'
            << "steps: " << r.steps_executed << '\n'
            << "quiescent: " << (r.quiescent ? "yes" : "no") << '\n'
            << "peak_spikes: " << r.peak_spikes << '\n';
  if (o.trace) std::cout << snp::format_trace(r.trace);
  return kOk;
}

int cmd_explore(const std::string& file, std::int64_t steps, std::size_t bound,
                const std::string& mode, const std::vector<std::string>& extras) {
  auto sys = load_system(file, mode_override(mode));
  print_warnings(sys);
  auto trains = input_trains(extras, sys.inputs().size());
  auto outputs = snp::explore(sys, trains, steps, bound);
  std::vector<std::string> lines;
  for (const auto& t : outputs) lines.push_back(join(t, "(empty)"));
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) std::cout << l << '\n';
  return kOk;
}

int cmd_dot(const std::string& file) {
  auto sys = load_system(file);
  std::cout << snp::export_dot(sys.def());
  return kOk;
}

void emit(const snp::devices::DeviceHandle& d, const std::string& path) {
  const std::string text = snp::render_system(d.system.def());
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path + "'");
}

bool to_bit(const std::string& s) {
  if (s == "0" || s == "false") return false;
  if (s == "1" || s == "true") return true;
  throw UsageError("gate input must be 0 or 1, got '" + s + "'");
}

int cmd_device(const std::string& name, const std::vector<std::string>& args,
               const std::string& emit_path, std::optional<std::uint64_t> vmax) {
  namespace dv = snp::devices;
  auto arity = [&](std::size_t n) {
    if (emit_path.empty() && args.size() != n) {
      throw UsageError("device " + name + " takes " + std::to_string(n) + " argument(s), got " +
                       std::to_string(args.size()));
    }
    if (!args.empty() && args.size() != n) {
      throw UsageError("device " + name + " takes " + std::to_string(n) + " argument(s)");
    }
    return !args.empty();
  };

  if (name == "add" || name == "eq") {
    auto d = name == "add" ? dv::adder_device() : dv::equality_device();
    const bool compute = arity(2);
    if (!emit_path.empty()) emit(d, emit_path);
    if (!compute) return kOk;
    const auto a = to_number(args[0], "operand"), b = to_number(args[1], "operand");
    if (name == "add") {
      std::cout << dv::add_numbers(d, a, b) << '\n';
    } else {
      std::cout << (dv::compare_numbers(d, a, b).equal ? "true" : "false") << '\n';
    }
    return kOk;
  }
  if (name == "and" || name == "or" || name == "not") {
    auto d = name == "and" ? dv::and_gate() : name == "or" ? dv::or_gate() : dv::not_gate();
    const bool compute = arity(d.arity);
    if (!emit_path.empty()) emit(d, emit_path);
    if (!compute) return kOk;
    std::array<bool, 2> bits{};
    for (std::size_t i = 0; i < args.size(); ++i) bits[i] = to_bit(args[i]);
    std::cout << (dv::eval_gate(d, std::span<const bool>(bits.data(), args.size())) ? "true" : "false")
              << '\n';
    return kOk;
  }
  if (name == "sort") {
    if (args.empty()) throw UsageError("device sort needs at least one value");
    std::vector<std::uint64_t> values;
    for (const auto& a : args) values.push_back(to_number(a, "value"));
    const std::uint64_t cap =
        vmax.value_or(std::max<std::uint64_t>(1, *std::max_element(values.begin(), values.end())));
    auto d = dv::sorter_device(values.size(), cap);
    if (!emit_path.empty()) emit(d, emit_path);
    auto sorted = dv::sort_numbers(d, values);
    for (std::size_t i = 0; i < sorted.size(); ++i) std::cout << (i ? " " : "") << sorted[i];
    std::cout << '\n';
    return kOk;
  }
  throw UsageError("unknown device '" + name + "' (expected add, eq, and, or, not, sort)");
}

int cmd_os(const std::string& file, std::uint64_t ticks, std::uint64_t quantum,
           std::uint64_t priority_cap) {
  const std::string text = read_file(file);
  snp::os::JobBatch batch;
  try {
    batch = snp::os::parse_job_batch(text, std::filesystem::path(file).parent_path());
  } catch (const snp::ParseError& e) {
    throw snp::ParseError(file + ":" + e.what(), 0, 0);
  }
  snp::os::Environment env(batch.pool, priority_cap);
  auto trace = snp::os::run_os(env, std::move(batch.jobs), ticks, quantum);
  for (const auto& rec : trace) std::cout << snp::os::format_record(rec) << '\n';
  std::cout << "ticks: " << env.ticks() << '\n' << "total_steps: " << env.account_total() << '\n';
  std::cout << "completed:";
  for (const auto& id : env.completed()) std::cout << ' ' << id;
  std::cout << '\n' << "pending:";
  for (const auto& id : env.queue()) std::cout << ' ' << id;
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking neural P system simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("snpsim 0.1.0"));

  std::string file;

  auto* check = app.add_subcommand("check", "Parse and validate a system file");
  check->add_option("file", file, "System file")->required();

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run a system (inputs via --in1 <train> ...)");
  run->add_option("file", ro.file, "System file")->required();
  run->add_option("--steps", ro.steps, "Maximum number of steps")->capture_default_str();
  run->add_option("--seed", ro.seed, "Seed for the uniform random chooser");
  run->add_option("--chooser", ro.chooser, "first | seeded");
  run->add_flag("--trace", ro.trace, "Print the step-event table");
  run->add_option("--mode", ro.mode, "Override the mode: standard | exhaustive");
  run->allow_extras();

  std::int64_t explore_steps = 50;
  std::size_t bound = 100000;
  std::string explore_mode;
  auto* explore = app.add_subcommand("explore", "List every reachable output train");
  explore->add_option("file", file, "System file")->required();
  explore->add_option("--steps", explore_steps, "Maximum number of steps")->capture_default_str();
  explore->add_option("--bound", bound, "Maximum distinct configurations")->capture_default_str();
  explore->add_option("--mode", explore_mode, "Override the mode: standard | exhaustive");
  explore->allow_extras();

  auto* dot = app.add_subcommand("dot", "Export a system as a Graphviz digraph");
  dot->add_option("file", file, "System file")->required();

  std::string device_name, emit_path;
  std::vector<std::string> device_args;
  std::optional<std::uint64_t> vmax;
  auto* device = app.add_subcommand("device", "Evaluate a built-in device: add eq and or not sort");
  device->add_option("name", device_name, "Device name")->required();
  device->add_option("args", device_args, "Device operands");
  device->add_option("--emit", emit_path, "Write the device's source to a file ('-' for stdout)");
  device->add_option("--vmax", vmax, "Sorter capacity (default: largest value)");

  std::uint64_t ticks = 1000, quantum = 4, priority_cap = snp::os::Environment::kDefaultPriorityCap;
  auto* os = app.add_subcommand("os", "Run a job batch on the SNP-driven scheduler");
  os->add_option("jobs", file, "Job batch file")->required();
  os->add_option("--ticks", ticks, "Maximum number of ticks")->capture_default_str();
  os->add_option("--quantum", quantum, "Register-machine steps per tick")->capture_default_str();
  os->add_option("--priority-cap", priority_cap, "Largest priority the sorter accepts")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*check) return cmd_check(file);
    if (*run) return cmd_run(ro, run->remaining());
    if (*explore) return cmd_explore(file, explore_steps, bound, explore_mode, explore->remaining());
    if (*dot) return cmd_dot(file);
    if (*device) return cmd_device(device_name, device_args, emit_path, vmax);
    if (*os) return cmd_os(file, ticks, quantum, priority_cap);
  } catch (const snp::BoundExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBound;
  } catch (const snp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const snp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const snp::SizeCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

#include "snp/devices.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace snp::devices {
namespace {

NeuronDef forwarder(std::string name) {
  return {std::move(name), 0, {RuleDef::bare(1, 1)}};
}

std::string indexed(char prefix, std::size_t i) { return prefix + std::to_string(i); }

}  // namespace

std::size_t bit_length(std::uint64_t n) {
  std::size_t bits = 0;
  while (n) {
    ++bits;
    n >>= 1;
  }
  return bits;
}

SpikeTrain encode_number_lsb(std::uint64_t n, std::size_t width) {
  if (bit_length(n) > width) {
    throw std::invalid_argument(std::to_string(n) + " does not fit in " + std::to_string(width) +
                                " bits");
  }
  SpikeTrain train(width, 0);
  for (std::size_t i = 0; i < width && i < 64; ++i) train[i] = (n >> i) & 1u;
  return train;
}

std::uint64_t decode_train_lsb(std::span<const std::uint64_t> train, std::uint64_t latency) {
  std::uint64_t value = 0;
  for (std::size_t pos = 0; pos < train.size(); ++pos) {
    if (train[pos] > 1) {
      throw std::invalid_argument("non-binary entry " + std::to_string(train[pos]) +
                                  " at position " + std::to_string(pos));
    }
    if (pos < latency || train[pos] == 0) continue;
    const std::uint64_t bit = pos - latency;
    if (bit >= 64) throw std::overflow_error("decoded value exceeds 64 bits");
    value |= std::uint64_t{1} << bit;
  }
  return value;
}

std::uint64_t decode_interval(std::span<const std::uint64_t> train) {
  std::vector<std::size_t> spikes;
  for (std::size_t i = 0; i < train.size() && spikes.size() < 2; ++i) {
    if (train[i] != 0) spikes.push_back(i);
  }
  if (spikes.size() < 2) throw std::invalid_argument("train has fewer than two spikes");
  return spikes[1] - spikes[0];
}

// --- adder ---------------------------------------------------------------

DeviceHandle adder_device() {
  SystemDef def;
  def.name = "adder";
  def.mode = Mode::Standard;
  def.neurons.push_back(forwarder("in1"));
  def.neurons.push_back(forwarder("in2"));
  // Holds carry + incoming bits; 1 -> emit, 2 -> keep a carry, 3 -> emit and keep a carry.
  def.neurons.push_back({"add", 0,
                         {RuleDef::bare(1, 1), RuleDef::make("a^2", 1, 0),
                          RuleDef::make("a^3", 2, 1)}});
  def.synapses = {{"in1", "add"}, {"in2", "add"}};
  def.inputs = {"in1", "in2"};
  def.output = "add";
  return {"add", validate_system(std::move(def)), 1, Mode::Standard,
          ResultConvention::BinaryTrain, 2, 0};
}

namespace {
const DeviceHandle& shared_adder() {
  static const DeviceHandle adder = adder_device();
  return adder;
}
}  // namespace

RunResult run_adder(std::uint64_t a, std::uint64_t b) { return run_adder(shared_adder(), a, b); }

RunResult run_adder(const DeviceHandle& adder, std::uint64_t a, std::uint64_t b) {
  const std::size_t width = std::max(bit_length(a), bit_length(b)) + 1;
  const std::array<SpikeTrain, 2> trains{encode_number_lsb(a, width), encode_number_lsb(b, width)};
  FirstDeclaredChooser chooser;
  return run(adder.system, trains, static_cast<std::int64_t>(width + adder.latency + 1), chooser);
}

std::uint64_t add_numbers(const DeviceHandle& adder, std::uint64_t a, std::uint64_t b) {
  return decode_train_lsb(run_adder(adder, a, b).output_train, adder.latency);
}

std::uint64_t add_numbers(std::uint64_t a, std::uint64_t b) {
  return add_numbers(shared_adder(), a, b);
}

// --- equality ------------------------------------------------------------

DeviceHandle equality_device() {
  SystemDef def;
  def.name = "equality";
  def.mode = Mode::Standard;
  def.neurons.push_back(forwarder("in1"));
  def.neurons.push_back(forwarder("in2"));
  def.neurons.push_back({"check", 0, {RuleDef::bare(2, 0), RuleDef::bare(1, 1)}});
  def.synapses = {{"in1", "check"}, {"in2", "check"}};
  def.inputs = {"in1", "in2"};
  def.output = "check";
  return {"eq", validate_system(std::move(def)), 1, Mode::Standard,
          ResultConvention::BinaryTrain, 2, 0};
}

EqualityOutcome compare_numbers(std::uint64_t a, std::uint64_t b) {
  static const DeviceHandle eq = equality_device();
  return compare_numbers(eq, a, b);
}

EqualityOutcome compare_numbers(const DeviceHandle& eq, std::uint64_t a, std::uint64_t b) {
  const std::size_t width = std::max(bit_length(a), bit_length(b));
  const std::array<SpikeTrain, 2> trains{encode_number_lsb(a, width), encode_number_lsb(b, width)};
  FirstDeclaredChooser chooser;
  RunResult r = run(eq.system, trains, static_cast<std::int64_t>(width + eq.latency + 2), chooser);
  EqualityOutcome out;
  out.equal = std::all_of(r.output_train.begin(), r.output_train.end(),
                          [](std::uint64_t v) { return v == 0; });
  out.output_train = std::move(r.output_train);
  return out;
}

bool numbers_equal(std::uint64_t a, std::uint64_t b) { return compare_numbers(a, b).equal; }

// --- gates ---------------------------------------------------------------

namespace {

DeviceHandle binary_gate(std::string name, std::uint64_t three_spike_output) {
  SystemDef def;
  def.name = name + "_gate";
  def.mode = Mode::Standard;
  def.neurons.push_back({"n1", 0,
                         {RuleDef::bare(2, 1), RuleDef::bare(3, three_spike_output),
                          RuleDef::make("a^4", 2, 1)}});
  def.inputs = {"n1"};
  def.output = "n1";
  return {std::move(name), validate_system(std::move(def)), 0, Mode::Standard,
          ResultConvention::SpikeTotal, 2, 0};
}

constexpr std::int64_t kGateStepLimit = 16;

}  // namespace

DeviceHandle and_gate() { return binary_gate("and", 1); }
DeviceHandle or_gate() { return binary_gate("or", 2); }

DeviceHandle not_gate() {
  SystemDef def;
  def.name = "not_gate";
  def.mode = Mode::Exhaustive;
  def.neurons.push_back({"n1", 1, {RuleDef::make("a^2", 1, 1), RuleDef::bare(3, 1)}});
  def.neurons.push_back({"n2", 0, {RuleDef::make("a", 1, 1), RuleDef::make("a^2", 2, 1)}});
  def.synapses = {{"n1", "n2"}, {"n2", "n1"}};
  def.inputs = {"n1"};
  def.output = "n1";
  return {"not", validate_system(std::move(def)), 0, Mode::Exhaustive,
          ResultConvention::SpikeTotal, 1, 0};
}

GateOutcome run_gate(const DeviceHandle& gate, std::span<const bool> inputs) {
  if (inputs.size() != gate.arity) {
    throw std::invalid_argument(gate.name + " gate takes " + std::to_string(gate.arity) +
                                " input(s), got " + std::to_string(inputs.size()));
  }
  if (gate.system.inputs().size() != 1) {
    throw std::invalid_argument(gate.name + " is not a single-input gate");
  }
  GateOutcome out;
  out.initial = initial_configuration(gate.system);
  std::uint64_t injected = 0;
  for (bool v : inputs) injected += v ? 2 : 1;
  out.initial.neurons[gate.system.inputs().front()].spikes += injected;

  FirstDeclaredChooser chooser;
  out.run = run(gate.system, {}, kGateStepLimit, chooser, out.initial);
  for (auto v : out.run.output_train) out.emitted += v;
  if (out.emitted != 1 && out.emitted != 2) {
    throw std::logic_error(gate.name + " gate emitted " + std::to_string(out.emitted) +
                           " spikes; expected 1 or 2");
  }
  out.value = out.emitted == 2;
  return out;
}

bool eval_gate(const DeviceHandle& gate, std::span<const bool> inputs) {
  return run_gate(gate, inputs).value;
}

// --- sorter --------------------------------------------------------------

DeviceHandle sorter_device(std::size_t n, std::uint64_t vmax) {
  if (n == 0 || vmax == 0) throw std::invalid_argument("sorter needs n >= 1 and vmax >= 1");
  SystemDef def;
  def.name = "sorter" + std::to_string(n);
  def.mode = Mode::Standard;
  for (std::size_t i = 1; i <= n; ++i) {
    def.neurons.push_back({indexed('I', i), 0, {RuleDef::make("a(a*)", 1, 1)}});
    def.inputs.push_back(indexed('I', i));
  }
  for (std::size_t j = 1; j <= n; ++j) {
    NeuronDef t{indexed('T', j), 0, {}};
    for (std::size_t m = j; m <= n; ++m) t.rules.push_back(RuleDef::bare(m, 1));
    for (std::size_t m = 1; m < j; ++m) t.rules.push_back(RuleDef::bare(m, 0));
    def.neurons.push_back(std::move(t));
  }
  for (std::size_t j = 1; j <= n; ++j) def.neurons.push_back({indexed('O', j), 0, {}});
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) def.synapses.push_back({indexed('I', i), indexed('T', j)});
  }
  for (std::size_t j = 1; j <= n; ++j) def.synapses.push_back({indexed('T', j), indexed('O', j)});
  return {"sort", validate_system(std::move(def)), 0, Mode::Standard,
          ResultConvention::FinalConfiguration, n, vmax};
}

std::vector<std::uint64_t> sort_numbers(const DeviceHandle& sorter,
                                        std::span<const std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("nothing to sort");
  if (values.size() != sorter.arity) {
    throw std::invalid_argument("sorter takes " + std::to_string(sorter.arity) + " values, got " +
                                std::to_string(values.size()));
  }
  const System& sys = sorter.system;
  Configuration start = initial_configuration(sys);
  std::uint64_t largest = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > sorter.capacity) {
      throw std::invalid_argument("value " + std::to_string(values[i]) + " exceeds vmax " +
                                  std::to_string(sorter.capacity));
    }
    start.neurons[sys.inputs()[i]].spikes = values[i];
    largest = std::max(largest, values[i]);
  }
  FirstDeclaredChooser chooser;
  RunResult r = run(sys, {}, static_cast<std::int64_t>(largest + 2), chooser, std::move(start));

  std::vector<std::uint64_t> sorted;
  for (std::size_t j = 1; j <= values.size(); ++j) {
    sorted.push_back(r.final_config.neurons[*sys.index_of(indexed('O', j))].spikes);
  }
  return sorted;
}

std::vector<std::uint64_t> sort_numbers(std::span<const std::uint64_t> values,
                                        std::uint64_t vmax) {
  if (values.empty()) throw std::invalid_argument("nothing to sort");
  return sort_numbers(sorter_device(values.size(), vmax), values);
}

}  // namespace snp::devices

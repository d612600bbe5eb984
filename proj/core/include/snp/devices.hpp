#pragma once

// Ready-made SN P systems: binary adder, equality checker, Boolean gates
// and a three-layer sorter, with harnesses that encode inputs, run the
// system and read the result.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snp/engine.hpp"
#include "snp/system.hpp"

namespace snp::devices {

enum class ResultConvention { BinaryTrain, SpikeTotal, FinalConfiguration };

struct DeviceHandle {
  std::string name;
  System system;
  // Output index of bit i is input index i + latency.
  std::uint64_t latency = 0;
  Mode mode = Mode::Standard;
  ResultConvention convention = ResultConvention::BinaryTrain;
  std::size_t arity = 0;      // number of operands the harness takes
  std::uint64_t capacity = 0; // sorter: largest accepted value
};

/// Bit i of n at position i. Throws std::invalid_argument if n needs more
/// than `width` bits.
SpikeTrain encode_number_lsb(std::uint64_t n, std::size_t width);
/// Sum of train[latency + i] * 2^i. Throws std::invalid_argument on entries > 1.
std::uint64_t decode_train_lsb(std::span<const std::uint64_t> train, std::uint64_t latency);
/// Distance between the first two non-zero positions.
std::uint64_t decode_interval(std::span<const std::uint64_t> train);

std::size_t bit_length(std::uint64_t n);

DeviceHandle adder_device();
std::uint64_t add_numbers(std::uint64_t a, std::uint64_t b);
std::uint64_t add_numbers(const DeviceHandle& adder, std::uint64_t a, std::uint64_t b);
RunResult run_adder(std::uint64_t a, std::uint64_t b);
RunResult run_adder(const DeviceHandle& adder, std::uint64_t a, std::uint64_t b);

DeviceHandle equality_device();
struct EqualityOutcome {
  bool equal = false;
  SpikeTrain output_train;
};
EqualityOutcome compare_numbers(std::uint64_t a, std::uint64_t b);
EqualityOutcome compare_numbers(const DeviceHandle& eq, std::uint64_t a, std::uint64_t b);
bool numbers_equal(std::uint64_t a, std::uint64_t b);

DeviceHandle and_gate();
DeviceHandle or_gate();
DeviceHandle not_gate();

struct GateOutcome {
  bool value = false;
  std::uint64_t emitted = 0;  // total spikes sent to the environment
  RunResult run;
  Configuration initial;  // configuration after inputs were introduced
};
/// Logical 0 is one spike and 1 is two; binary gates receive the sum of
/// both encodings in their single neuron before the first step.
GateOutcome run_gate(const DeviceHandle& gate, std::span<const bool> inputs);
bool eval_gate(const DeviceHandle& gate, std::span<const bool> inputs);

/// Input layer I1..In fully connected to threshold layer T1..Tn; Tj fires
/// when it receives at least j spikes and feeds accumulator Oj.
DeviceHandle sorter_device(std::size_t n, std::uint64_t vmax);
/// Descending order. Throws std::invalid_argument on empty input or a
/// value above `vmax`.
std::vector<std::uint64_t> sort_numbers(std::span<const std::uint64_t> values,
                                        std::uint64_t vmax);
/// `values.size()` must equal the sorter's arity.
std::vector<std::uint64_t> sort_numbers(const DeviceHandle& sorter,
                                        std::span<const std::uint64_t> values);

}  // namespace snp::devices

#pragma once

// Synchronous execution of SN P systems.
//
// One step runs four phases:
//   1. input spikes reach open input neurons (closed ones drop them);
//   2. pending firings due this step emit and the neuron reopens;
//   3. every open neuron with an applicable rule selects one, evaluated on
//      its content after phase 1; delay-0 rules fire immediately, delay-d
//      rules close the neuron until step t + d;
//   4. spikes emitted in phases 2 and 3 reach open targets.
// A neuron that fires a pending rule at step t selects again from t + 1.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "snp/system.hpp"

namespace snp {

using SpikeTrain = std::vector<std::uint64_t>;

struct PendingFiring {
  std::uint64_t emit = 0;
  std::uint64_t fire_at = 0;

  friend auto operator<=>(const PendingFiring&, const PendingFiring&) = default;
};

struct NeuronState {
  std::uint64_t spikes = 0;
  // First step at which the neuron accepts spikes again; 0 while open.
  // Non-zero exactly when `pending` is set, and then equal to its fire_at.
  std::uint64_t closed_until = 0;
  std::optional<PendingFiring> pending;

  friend auto operator<=>(const NeuronState&, const NeuronState&) = default;
};

struct Configuration {
  std::uint64_t time = 0;  // index of the next step to run
  std::vector<NeuronState> neurons;

  std::uint64_t total_spikes() const noexcept;
  bool closed(std::size_t neuron) const noexcept {
    return neurons[neuron].closed_until > time;
  }

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// Same neuron contents, ignoring the clock.
bool same_state(const Configuration& a, const Configuration& b);

Configuration initial_configuration(const System& system);

struct StepEvent {
  enum class Kind {
    InputReceived,
    InputDropped,
    RuleSelected,
    Fired,
    Forgot,
    Received,
    Lost,
  };

  std::uint64_t step = 0;
  std::string neuron;
  Kind kind = Kind::InputReceived;
  std::uint64_t count = 0;  // spikes involved (consumed for RuleSelected)
  std::size_t rule = 0;     // RuleSelected only
  std::uint64_t fire_at = 0;  // RuleSelected only

  friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

std::string_view to_string(StepEvent::Kind kind);

/// `step<TAB>neuron<TAB>kind<TAB>details`, no trailing newline.
std::string format_event(const StepEvent& event);
std::string format_trace(std::span<const StepEvent> events);

/// Picks one rule for a neuron among its applicable rules.
class Chooser {
 public:
  virtual ~Chooser() = default;
  /// Returns an element of `applicable` (non-empty, ascending rule indices).
  virtual std::size_t choose(std::size_t neuron, std::span<const std::size_t> applicable) = 0;
};

class FirstDeclaredChooser final : public Chooser {
 public:
  std::size_t choose(std::size_t, std::span<const std::size_t> applicable) override {
    return applicable.front();
  }
};

class SeededUniformChooser final : public Chooser {
 public:
  explicit SeededUniformChooser(std::uint64_t seed) : rng_(seed) {}
  std::size_t choose(std::size_t, std::span<const std::size_t> applicable) override {
    return applicable[rng_() % applicable.size()];
  }

 private:
  std::mt19937_64 rng_;
};

/// Rules whose guard accepts the whole content and whose consume fits.
/// Empty when the neuron is closed at `step`.
std::vector<std::size_t> applicable_rules(const NeuronState& state,
                                          std::span<const RuleDef> rules, std::uint64_t step);

struct StepResult {
  Configuration config;
  std::uint64_t emitted = 0;  // sent to the environment by the output neuron
  std::vector<StepEvent> events;
};

/// Runs one step. `inputs` holds one count per input neuron (missing
/// entries are zero). Standard-mode systems accept only 0/1 inputs.
StepResult step(const System& system, const Configuration& config,
                std::span<const std::uint64_t> inputs, Chooser& chooser);

struct RunResult {
  SpikeTrain output_train;
  Configuration final_config;
  std::uint64_t steps_executed = 0;
  bool quiescent = false;
  std::uint64_t peak_spikes = 0;
  std::vector<StepEvent> trace;
};

/// No pending firing, no applicable rule, and no input left at or after
/// `config.time`.
bool is_quiescent(const System& system, const Configuration& config,
                  std::span<const SpikeTrain> input_trains);

/// Steps until quiescent or `max_steps` steps ran. Starts from `start` when
/// given, otherwise from the initial configuration.
RunResult run(const System& system, std::span<const SpikeTrain> input_trains,
              std::int64_t max_steps, Chooser& chooser,
              std::optional<Configuration> start = std::nullopt);

inline std::uint64_t peak_spikes(const RunResult& result) { return result.peak_spikes; }

/// Every distinct output train reachable under some sequence of rule
/// choices. Throws BoundExceeded once more than `state_bound` distinct
/// search nodes are visited.
std::set<SpikeTrain> explore(const System& system, std::span<const SpikeTrain> input_trains,
                             std::int64_t max_steps, std::size_t state_bound,
                             std::optional<Configuration> start = std::nullopt);

}  // namespace snp

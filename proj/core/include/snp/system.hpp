#pragma once

// Static description of a spiking neural P system and its validated form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "snp/spike_regex.hpp"

namespace snp {

enum class Mode { Standard, Exhaustive };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

/// Rule `guard / a^consume -> a^produce ; delay`. produce == 0 erases.
struct RuleDef {
  SpikeExpr guard_expr;
  SpikeSet guard;
  std::uint64_t consume = 1;
  std::uint64_t produce = 1;
  std::uint64_t delay = 0;

  /// Compiles `guard_text` and builds the rule.
  static RuleDef make(std::string_view guard_text, std::uint64_t consume,
                      std::uint64_t produce, std::uint64_t delay = 0,
                      std::size_t size_cap = kDefaultGuardSizeCap);
  /// Bare form `a^k -> a^p ; d`: guard {k}, consumes all k spikes.
  static RuleDef bare(std::uint64_t k, std::uint64_t produce, std::uint64_t delay = 0);

  bool erasing() const noexcept { return produce == 0; }
  /// s^e -> lambda with guard exactly {e} and no delay.
  bool plain_forgetting() const;
  /// Firing rule with single-spike output, or a plain forgetting rule.
  bool classic() const;

  // The compiled guard is a function of guard_expr and is not compared.
  friend bool operator==(const RuleDef& a, const RuleDef& b) {
    return a.guard_expr == b.guard_expr && a.consume == b.consume &&
           a.produce == b.produce && a.delay == b.delay;
  }
};

struct NeuronDef {
  std::string name;
  std::uint64_t initial_spikes = 0;
  std::vector<RuleDef> rules;

  friend bool operator==(const NeuronDef&, const NeuronDef&) = default;
};

struct Synapse {
  std::string from;
  std::string to;

  friend auto operator<=>(const Synapse&, const Synapse&) = default;
};

struct SystemDef {
  std::string name = "snp";
  Mode mode = Mode::Standard;
  std::vector<NeuronDef> neurons;
  std::vector<Synapse> synapses;
  std::vector<std::string> inputs;
  std::optional<std::string> output;

  /// Structural equality; synapses compare as sets.
  friend bool operator==(const SystemDef& a, const SystemDef& b);
};

/// Validated system with name resolution and adjacency precomputed.
/// Immutable; safe to share between concurrent runs.
class System {
 public:
  const SystemDef& def() const noexcept { return def_; }
  Mode mode() const noexcept { return def_.mode; }
  std::size_t size() const noexcept { return def_.neurons.size(); }
  const NeuronDef& neuron(std::size_t i) const { return def_.neurons[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::vector<std::size_t>& targets(std::size_t i) const { return targets_[i]; }
  const std::vector<std::size_t>& inputs() const noexcept { return inputs_; }
  std::optional<std::size_t> output() const noexcept { return output_; }

  /// Standard mode and every rule classic (single-spike firing or plain forgetting).
  bool classic() const noexcept { return classic_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  friend System validate_system(SystemDef def);

  SystemDef def_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> targets_;
  std::vector<std::size_t> inputs_;
  std::optional<std::size_t> output_;
  bool classic_ = true;
  std::vector<std::string> warnings_;
};

/// Checks names, references, self-synapses and forgetting-rule overlap.
/// Overlap is an error in classic systems and a warning otherwise.
/// Duplicate synapses collapse to one. Throws ValidationError.
System validate_system(SystemDef def);

}  // namespace snp

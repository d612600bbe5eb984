#include "snp/system.hpp"

#include <algorithm>
#include <set>

#include "snp/error.hpp"

namespace snp {

std::string_view to_string(Mode mode) {
  return mode == Mode::Standard ? "standard" : "exhaustive";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "standard") return Mode::Standard;
  if (text == "exhaustive") return Mode::Exhaustive;
  return std::nullopt;
}

RuleDef RuleDef::make(std::string_view guard_text, std::uint64_t consume,
                      std::uint64_t produce, std::uint64_t delay, std::size_t size_cap) {
  RuleDef r;
  r.guard_expr = parse_spike_expr(guard_text);
  r.guard = compile(r.guard_expr, size_cap);
  r.consume = consume;
  r.produce = produce;
  r.delay = delay;
  return r;
}

RuleDef RuleDef::bare(std::uint64_t k, std::uint64_t produce, std::uint64_t delay) {
  std::string guard = k == 1 ? "a" : "a^" + std::to_string(k);
  return make(guard, k, produce, delay);
}

bool RuleDef::plain_forgetting() const {
  if (produce != 0 || delay != 0) return false;
  auto only = guard.singleton();
  return only && *only == consume;
}

bool RuleDef::classic() const { return produce == 1 || plain_forgetting(); }

bool operator==(const SystemDef& a, const SystemDef& b) {
  if (a.name != b.name || a.mode != b.mode || a.neurons != b.neurons ||
      a.inputs != b.inputs || a.output != b.output) {
    return false;
  }
  std::set<Synapse> sa(a.synapses.begin(), a.synapses.end());
  std::set<Synapse> sb(b.synapses.begin(), b.synapses.end());
  return sa == sb;
}

std::optional<std::size_t> System::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

System validate_system(SystemDef def) {
  System sys;

  for (std::size_t i = 0; i < def.neurons.size(); ++i) {
    const auto& n = def.neurons[i];
    if (!sys.index_.emplace(n.name, i).second) {
      throw ValidationError("duplicate neuron name '" + n.name + "'");
    }
  }
  auto resolve = [&](const std::string& name, std::string_view where) {
    auto it = sys.index_.find(name);
    if (it == sys.index_.end()) {
      throw ValidationError("unknown neuron '" + name + "' in " + std::string(where));
    }
    return it->second;
  };

  std::set<Synapse> unique(def.synapses.begin(), def.synapses.end());
  def.synapses.assign(unique.begin(), unique.end());
  sys.targets_.assign(def.neurons.size(), {});
  for (const auto& s : def.synapses) {
    std::size_t from = resolve(s.from, "synapse");
    std::size_t to = resolve(s.to, "synapse");
    if (from == to) throw ValidationError("self-synapse on neuron '" + s.from + "'");
    sys.targets_[from].push_back(to);
  }

  std::set<std::size_t> seen_inputs;
  for (const auto& name : def.inputs) {
    std::size_t i = resolve(name, "input list");
    if (!seen_inputs.insert(i).second) {
      throw ValidationError("neuron '" + name + "' listed twice as input");
    }
    sys.inputs_.push_back(i);
  }
  if (def.output) sys.output_ = resolve(*def.output, "output");

  bool classic = def.mode == Mode::Standard;
  for (const auto& n : def.neurons) {
    for (std::size_t r = 0; r < n.rules.size(); ++r) {
      const auto& rule = n.rules[r];
      if (rule.consume == 0) {
        throw ValidationError("rule " + std::to_string(r) + " of neuron '" + n.name +
                              "' consumes zero spikes");
      }
      if (!rule.classic()) classic = false;
      if (rule.produce > rule.consume) {
        sys.warnings_.push_back("rule " + std::to_string(r) + " of neuron '" + n.name +
                                "' produces more spikes than it consumes");
      }
    }
  }
  sys.classic_ = classic;

  for (const auto& n : def.neurons) {
    for (const auto& forget : n.rules) {
      if (!forget.plain_forgetting()) continue;
      for (std::size_t r = 0; r < n.rules.size(); ++r) {
        const auto& fire = n.rules[r];
        if (fire.erasing() || !fire.guard.contains(forget.consume)) continue;
        std::string msg = "neuron '" + n.name + "': forgetting rule for " +
                          std::to_string(forget.consume) + " spikes overlaps the guard of rule " +
                          std::to_string(r);
        if (classic) throw ValidationError(msg);
        sys.warnings_.push_back(msg);
      }
    }
  }

  sys.def_ = std::move(def);
  return sys;
}

}  // namespace snp

#include "snp/engine.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "snp/error.hpp"

namespace snp {

std::uint64_t Configuration::total_spikes() const noexcept {
  std::uint64_t total = 0;
  for (const auto& n : neurons) total += n.spikes;
  return total;
}

bool same_state(const Configuration& a, const Configuration& b) { return a.neurons == b.neurons; }

Configuration initial_configuration(const System& system) {
  Configuration c;
  c.neurons.resize(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    c.neurons[i].spikes = system.neuron(i).initial_spikes;
  }
  return c;
}

std::string_view to_string(StepEvent::Kind kind) {
  switch (kind) {
    case StepEvent::Kind::InputReceived: return "input-received";
    case StepEvent::Kind::InputDropped: return "input-dropped-closed";
    case StepEvent::Kind::RuleSelected: return "rule-selected";
    case StepEvent::Kind::Fired: return "fired";
    case StepEvent::Kind::Forgot: return "forgot";
    case StepEvent::Kind::Received: return "received";
    case StepEvent::Kind::Lost: return "lost-closed";
  }
  return "?";
}

std::string format_event(const StepEvent& e) {
  std::string line = std::to_string(e.step) + '\t' + e.neuron + '\t' + std::string(to_string(e.kind)) + '\t';
  switch (e.kind) {
    case StepEvent::Kind::RuleSelected:
      line += "rule=" + std::to_string(e.rule) + " consumed=" + std::to_string(e.count) +
              " fire_at=" + std::to_string(e.fire_at);
      break;
    case StepEvent::Kind::Fired:
      line += "emitted=" + std::to_string(e.count);
      break;
    default:
      line += "count=" + std::to_string(e.count);
      break;
  }
  return line;
}

std::string format_trace(std::span<const StepEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

std::vector<std::size_t> applicable_rules(const NeuronState& state,
                                          std::span<const RuleDef> rules, std::uint64_t step) {
  std::vector<std::size_t> out;
  if (state.closed_until > step || state.pending) return out;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (state.spikes >= rules[r].consume && rules[r].guard.contains(state.spikes)) {
      out.push_back(r);
    }
  }
  return out;
}

StepResult step(const System& system, const Configuration& config,
                std::span<const std::uint64_t> inputs, Chooser& chooser) {
  if (inputs.size() > system.inputs().size()) {
    throw SimulationError("got " + std::to_string(inputs.size()) + " input values for " +
                          std::to_string(system.inputs().size()) + " input neurons");
  }
  if (config.neurons.size() != system.size()) {
    throw SimulationError("configuration does not match the system");
  }
  if (system.mode() == Mode::Standard) {
    for (auto v : inputs) {
      if (v > 1) throw SimulationError("standard-mode input must be 0 or 1, got " + std::to_string(v));
    }
  }

  const std::uint64_t t = config.time;
  const std::size_t n = system.size();
  StepResult out;
  out.config = config;
  auto& neurons = out.config.neurons;
  auto event = [&](std::size_t i, StepEvent::Kind kind, std::uint64_t count) -> StepEvent& {
    StepEvent& e = out.events.emplace_back();
    e.step = t;
    e.neuron = system.neuron(i).name;
    e.kind = kind;
    e.count = count;
    return e;
  };

  // 1. input
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k] == 0) continue;
    std::size_t i = system.inputs()[k];
    if (neurons[i].closed_until > t) {
      event(i, StepEvent::Kind::InputDropped, inputs[k]);
    } else {
      neurons[i].spikes += inputs[k];
      event(i, StepEvent::Kind::InputReceived, inputs[k]);
    }
  }

  // 2. matured firings
  std::vector<std::uint64_t> emit(n, 0);
  std::vector<bool> reopened(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = neurons[i];
    if (!s.pending || s.pending->fire_at != t) continue;
    emit[i] = s.pending->emit;
    s.pending.reset();
    s.closed_until = 0;
    reopened[i] = true;
    if (emit[i] > 0) event(i, StepEvent::Kind::Fired, emit[i]);
  }

  // 3. rule selection
  const bool exhaustive = system.mode() == Mode::Exhaustive;
  for (std::size_t i = 0; i < n; ++i) {
    if (reopened[i]) continue;
    auto& s = neurons[i];
    const auto& rules = system.neuron(i).rules;
    auto options = applicable_rules(s, rules, t);
    if (options.empty()) continue;
    std::size_t r = chooser.choose(i, options);
    if (std::find(options.begin(), options.end(), r) == options.end()) {
      throw SimulationError("chooser picked an inapplicable rule");
    }
    const RuleDef& rule = rules[r];
    const std::uint64_t times = exhaustive ? s.spikes / rule.consume : 1;
    const std::uint64_t consumed = times * rule.consume;
    const std::uint64_t produced = times * rule.produce;
    s.spikes -= consumed;

    StepEvent& sel = event(i, StepEvent::Kind::RuleSelected, consumed);
    sel.rule = r;
    sel.fire_at = t + rule.delay;
    if (rule.erasing()) event(i, StepEvent::Kind::Forgot, consumed);

    if (rule.delay == 0) {
      if (produced > 0) {
        emit[i] += produced;
        event(i, StepEvent::Kind::Fired, produced);
      }
    } else {
      s.pending = PendingFiring{produced, t + rule.delay};
      s.closed_until = t + rule.delay;
    }
  }

  // 4. delivery
  std::vector<std::uint64_t> incoming(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (emit[i] == 0) continue;
    for (std::size_t target : system.targets(i)) incoming[target] += emit[i];
    if (system.output() == i) out.emitted += emit[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (incoming[i] == 0) continue;
    if (neurons[i].closed_until > t) {
      event(i, StepEvent::Kind::Lost, incoming[i]);
    } else {
      neurons[i].spikes += incoming[i];
      event(i, StepEvent::Kind::Received, incoming[i]);
    }
  }

  std::stable_sort(out.events.begin(), out.events.end(), [](const StepEvent& a, const StepEvent& b) {
    if (a.neuron != b.neuron) return a.neuron < b.neuron;
    return a.kind < b.kind;
  });
  out.config.time = t + 1;
  return out;
}

bool is_quiescent(const System& system, const Configuration& config,
                  std::span<const SpikeTrain> input_trains) {
  for (const auto& train : input_trains) {
    if (config.time < train.size()) return false;
  }
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto& s = config.neurons[i];
    if (s.pending) return false;
    if (!applicable_rules(s, system.neuron(i).rules, config.time).empty()) return false;
  }
  return true;
}

namespace {

std::vector<std::uint64_t> inputs_at(std::span<const SpikeTrain> trains, std::uint64_t t) {
  std::vector<std::uint64_t> v(trains.size(), 0);
  for (std::size_t k = 0; k < trains.size(); ++k) {
    if (t < trains[k].size()) v[k] = trains[k][t];
  }
  return v;
}

void check_run_args(const System& system, std::span<const SpikeTrain> trains, std::int64_t max_steps) {
  if (max_steps <= 0) throw SimulationError("max_steps must be positive");
  if (trains.size() > system.inputs().size()) {
    throw SimulationError("got " + std::to_string(trains.size()) + " input trains for " +
                          std::to_string(system.inputs().size()) + " input neurons");
  }
}

class RecordingChooser final : public Chooser {
 public:
  explicit RecordingChooser(std::size_t n) : options(n) {}
  std::size_t choose(std::size_t neuron, std::span<const std::size_t> applicable) override {
    options[neuron].assign(applicable.begin(), applicable.end());
    return applicable.front();
  }
  std::vector<std::vector<std::size_t>> options;
};

struct SearchNode {
  Configuration config;
  SpikeTrain output;
  auto operator<=>(const SearchNode&) const = default;
};

class ScriptedChooser final : public Chooser {
 public:
  explicit ScriptedChooser(std::vector<std::size_t> picks) : picks_(std::move(picks)) {}
  std::size_t choose(std::size_t neuron, std::span<const std::size_t>) override {
    return picks_[neuron];
  }

 private:
  std::vector<std::size_t> picks_;
};

}  // namespace

RunResult run(const System& system, std::span<const SpikeTrain> input_trains,
              std::int64_t max_steps, Chooser& chooser, std::optional<Configuration> start) {
  check_run_args(system, input_trains, max_steps);
  RunResult result;
  Configuration config = start ? std::move(*start) : initial_configuration(system);
  result.peak_spikes = config.total_spikes();

  while (result.steps_executed < static_cast<std::uint64_t>(max_steps)) {
    if (is_quiescent(system, config, input_trains)) break;
    auto inputs = inputs_at(input_trains, config.time);
    StepResult s = step(system, config, inputs, chooser);
    config = std::move(s.config);
    result.output_train.push_back(s.emitted);
    result.trace.insert(result.trace.end(), std::make_move_iterator(s.events.begin()),
                        std::make_move_iterator(s.events.end()));
    result.peak_spikes = std::max(result.peak_spikes, config.total_spikes());
    ++result.steps_executed;
  }
  result.quiescent = is_quiescent(system, config, input_trains);
  result.final_config = std::move(config);
  return result;
}

std::set<SpikeTrain> explore(const System& system, std::span<const SpikeTrain> input_trains,
                             std::int64_t max_steps, std::size_t state_bound,
                             std::optional<Configuration> start) {
  check_run_args(system, input_trains, max_steps);

  std::set<SpikeTrain> results;
  std::set<SearchNode> visited;
  std::deque<SearchNode> frontier;
  SearchNode root{start ? std::move(*start) : initial_configuration(system), {}};
  visited.insert(root);
  frontier.push_back(std::move(root));

  while (!frontier.empty()) {
    SearchNode node = std::move(frontier.front());
    frontier.pop_front();
    if (node.output.size() >= static_cast<std::uint64_t>(max_steps) ||
        is_quiescent(system, node.config, input_trains)) {
      results.insert(node.output);
      continue;
    }

    auto inputs = inputs_at(input_trains, node.config.time);
    RecordingChooser probe(system.size());
    step(system, node.config, inputs, probe);

    // Selections are independent across neurons, so every combination of
    // per-neuron options is a distinct successor.
    std::vector<std::size_t> branching;
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (probe.options[i].size() > 1) branching.push_back(i);
    }
    std::vector<std::size_t> digit(branching.size(), 0);
    std::vector<std::size_t> picks(system.size(), 0);
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (!probe.options[i].empty()) picks[i] = probe.options[i].front();
    }
    for (;;) {
      for (std::size_t k = 0; k < branching.size(); ++k) {
        picks[branching[k]] = probe.options[branching[k]][digit[k]];
      }
      ScriptedChooser scripted(picks);
      StepResult s = step(system, node.config, inputs, scripted);
      SearchNode child{std::move(s.config), node.output};
      child.output.push_back(s.emitted);
      if (visited.insert(child).second) {
        if (visited.size() > state_bound) {
          throw BoundExceeded("exploration visited more than " + std::to_string(state_bound) +
                              " configurations");
        }
        frontier.push_back(std::move(child));
      }

      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == probe.options[branching[k]].size()) {
        digit[k] = 0;
        ++k;
      }
      if (k == digit.size()) break;
    }
  }
  return results;
}

}  // namespace snp

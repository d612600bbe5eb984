#pragma once

// Register machines with ADD / SUB / HALT instructions.
//
// Text format, one instruction per line, `#` comments:
//   <label>: ADD <r> <l2> [<l3>]
//   <label>: SUB <r> <l2> <l3>
//   <label>: HALT
// The first instruction is the start label; the HALT instruction is the
// halt label. Registers are numbered from 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace snp::rm {

struct Add {
  std::size_t reg = 1;
  std::string next;
  std::string alt;  // equal to `next` for deterministic ADD

  friend bool operator==(const Add&, const Add&) = default;
};

struct Sub {
  std::size_t reg = 1;
  std::string nonzero;  // taken after decrementing
  std::string zero;     // taken when the register is empty

  friend bool operator==(const Sub&, const Sub&) = default;
};

struct Halt {
  friend bool operator==(const Halt&, const Halt&) = default;
};

using Operation = std::variant<Add, Sub, Halt>;

struct Instruction {
  std::string label;
  Operation op;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct MachineDef {
  std::size_t registers = 1;
  std::vector<Instruction> program;
  std::string start;
  std::string halt;
};

/// Validated machine. Jump targets are resolved to program indices.
class RegisterMachine {
 public:
  std::size_t registers() const noexcept { return def_.registers; }
  const std::vector<Instruction>& program() const noexcept { return def_.program; }
  std::size_t instruction_count() const noexcept { return def_.program.size(); }
  std::size_t start() const noexcept { return start_; }
  std::size_t halt() const noexcept { return halt_; }
  const std::string& label(std::size_t pc) const { return def_.program[pc].label; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Every ADD has identical successors.
  bool deterministic() const noexcept;
  const MachineDef& def() const noexcept { return def_; }

  // Resolved successors: for ADD {next, alt}, for SUB {nonzero, zero}.
  std::size_t first_target(std::size_t pc) const { return targets_[pc].first; }
  std::size_t second_target(std::size_t pc) const { return targets_[pc].second; }

 private:
  friend RegisterMachine validate_machine(MachineDef def);

  MachineDef def_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> targets_;
  std::size_t start_ = 0;
  std::size_t halt_ = 0;
};

/// Throws ValidationError on duplicate or dangling labels, a start label
/// not on ADD, a halt label not on HALT, or a register outside [1, m].
RegisterMachine validate_machine(MachineDef def);

/// Parses the text format (no validation). Throws ParseError.
MachineDef parse_machine_def(std::string_view text);
RegisterMachine parse_machine(std::string_view text);
std::string render_machine(const RegisterMachine& machine);

struct MachineState {
  std::vector<std::uint64_t> registers;  // registers[0] is register 1
  std::size_t current = 0;               // program index
  std::uint64_t steps = 0;

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

MachineState initial_state(const RegisterMachine& machine);

/// Resolves nondeterministic ADD successors.
class BranchChooser {
 public:
  /// Always the first successor.
  BranchChooser() = default;
  static BranchChooser seeded(std::uint64_t seed) { return BranchChooser(seed); }
  /// 0 for the first successor, 1 for the second.
  std::size_t pick() { return rng_ ? static_cast<std::size_t>((*rng_)() & 1u) : 0; }

 private:
  explicit BranchChooser(std::uint64_t seed) : rng_(std::mt19937_64(seed)) {}
  std::optional<std::mt19937_64> rng_;
};

/// Executes one instruction. Throws SimulationError on a halted state.
MachineState step_machine(const RegisterMachine& machine, MachineState state,
                          BranchChooser& chooser);

/// From all-zero registers; register 1 at HALT, or nullopt when `max_steps`
/// runs out first. Throws SimulationError when max_steps <= 0.
std::optional<std::uint64_t> run_generate(const RegisterMachine& machine, std::int64_t max_steps,
                                          BranchChooser& chooser);

struct AcceptVerdict {
  bool accepted = false;
  bool halted = false;
  MachineState final_state;
};

/// Deterministic machines only. With `strict`, acceptance also requires all
/// registers to be empty at HALT.
AcceptVerdict run_accept(const RegisterMachine& machine,
                         std::span<const std::uint64_t> initial_registers,
                         std::int64_t max_steps, bool strict = false);

}  // namespace snp::rm

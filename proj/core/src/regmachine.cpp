#include "snp/regmachine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "snp/error.hpp"

namespace snp::rm {

std::optional<std::size_t> RegisterMachine::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool RegisterMachine::deterministic() const noexcept {
  return std::all_of(def_.program.begin(), def_.program.end(), [](const Instruction& ins) {
    const auto* add = std::get_if<Add>(&ins.op);
    return !add || add->next == add->alt;
  });
}

RegisterMachine validate_machine(MachineDef def) {
  RegisterMachine m;
  if (def.registers == 0) throw ValidationError("machine needs at least one register");
  for (std::size_t i = 0; i < def.program.size(); ++i) {
    if (!m.index_.emplace(def.program[i].label, i).second) {
      throw ValidationError("duplicate label '" + def.program[i].label + "'");
    }
  }
  auto resolve = [&](const std::string& label, const std::string& from) {
    auto it = m.index_.find(label);
    if (it == m.index_.end()) {
      throw ValidationError("instruction '" + from + "' jumps to undeclared label '" + label + "'");
    }
    return it->second;
  };
  auto check_reg = [&](std::size_t r, const std::string& from) {
    if (r < 1 || r > def.registers) {
      throw ValidationError("instruction '" + from + "' uses register " + std::to_string(r) +
                            " outside [1, " + std::to_string(def.registers) + "]");
    }
  };

  m.targets_.resize(def.program.size(), {0, 0});
  for (std::size_t i = 0; i < def.program.size(); ++i) {
    const auto& ins = def.program[i];
    if (const auto* add = std::get_if<Add>(&ins.op)) {
      check_reg(add->reg, ins.label);
      m.targets_[i] = {resolve(add->next, ins.label), resolve(add->alt, ins.label)};
    } else if (const auto* sub = std::get_if<Sub>(&ins.op)) {
      check_reg(sub->reg, ins.label);
      m.targets_[i] = {resolve(sub->nonzero, ins.label), resolve(sub->zero, ins.label)};
    }
  }

  auto start = m.index_.find(def.start);
  if (start == m.index_.end()) throw ValidationError("start label '" + def.start + "' is undeclared");
  if (!std::holds_alternative<Add>(def.program[start->second].op)) {
    throw ValidationError("start label '" + def.start + "' must label an ADD instruction");
  }
  auto halt = m.index_.find(def.halt);
  if (halt == m.index_.end()) throw ValidationError("halt label '" + def.halt + "' is undeclared");
  if (!std::holds_alternative<Halt>(def.program[halt->second].op)) {
    throw ValidationError("halt label '" + def.halt + "' must label HALT");
  }
  for (const auto& ins : def.program) {
    if (std::holds_alternative<Halt>(ins.op) && ins.label != def.halt) {
      throw ValidationError("HALT at '" + ins.label + "' is not the halt label");
    }
  }
  m.start_ = start->second;
  m.halt_ = halt->second;
  m.def_ = std::move(def);
  return m;
}

namespace {

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

MachineDef parse_machine_def(std::string_view text) {
  MachineDef def;
  std::size_t line_no = 0;
  std::size_t max_reg = 0;
  std::optional<std::string> halt;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto colon = line.find(':');
    auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line_no, 1); };
    if (words(line).empty()) continue;
    if (colon == std::string_view::npos) fail("expected '<label>: <instruction>'");

    auto label_words = words(line.substr(0, colon));
    if (label_words.size() != 1) fail("expected a single label before ':'");
    auto parts = words(line.substr(colon + 1));
    if (parts.empty()) fail("missing instruction after ':'");

    auto reg = [&](std::string_view s) {
      std::size_t r = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), r);
      if (ec != std::errc{} || p != s.data() + s.size() || r == 0) {
        fail("register must be a positive integer, got '" + std::string(s) + "'");
      }
      max_reg = std::max(max_reg, r);
      return r;
    };

    Instruction ins;
    ins.label = std::string(label_words[0]);
    const std::string op = upper(parts[0]);
    if (op == "ADD") {
      if (parts.size() != 3 && parts.size() != 4) fail("expected: ADD <r> <l2> [<l3>]");
      Add add{reg(parts[1]), std::string(parts[2]), std::string(parts.size() == 4 ? parts[3] : parts[2])};
      ins.op = std::move(add);
    } else if (op == "SUB") {
      if (parts.size() != 4) fail("expected: SUB <r> <l2> <l3>");
      ins.op = Sub{reg(parts[1]), std::string(parts[2]), std::string(parts[3])};
    } else if (op == "HALT") {
      if (parts.size() != 1) fail("HALT takes no operands");
      if (halt) fail("more than one HALT instruction");
      halt = ins.label;
      ins.op = Halt{};
    } else {
      fail("unknown instruction '" + std::string(parts[0]) + "'");
    }
    if (def.program.empty()) def.start = ins.label;
    def.program.push_back(std::move(ins));
  }
  if (def.program.empty()) throw ParseError("empty machine", 0, 0);
  if (!halt) throw ParseError("machine has no HALT instruction", 0, 0);
  def.halt = *halt;
  def.registers = std::max<std::size_t>(max_reg, 1);
  return def;
}

RegisterMachine parse_machine(std::string_view text) {
  return validate_machine(parse_machine_def(text));
}

std::string render_machine(const RegisterMachine& machine) {
  std::ostringstream out;
  // The start instruction goes first so the text reparses with the same start.
  std::vector<std::size_t> order{machine.start()};
  for (std::size_t i = 0; i < machine.program().size(); ++i) {
    if (i != machine.start()) order.push_back(i);
  }
  for (std::size_t i : order) {
    const auto& ins = machine.program()[i];
    out << ins.label << ": ";
    if (const auto* add = std::get_if<Add>(&ins.op)) {
      out << "ADD " << add->reg << ' ' << add->next;
      if (add->alt != add->next) out << ' ' << add->alt;
    } else if (const auto* sub = std::get_if<Sub>(&ins.op)) {
      out << "SUB " << sub->reg << ' ' << sub->nonzero << ' ' << sub->zero;
    } else {
      out << "HALT";
    }
    out << '\n';
  }
  return out.str();
}

MachineState initial_state(const RegisterMachine& machine) {
  return {std::vector<std::uint64_t>(machine.registers(), 0), machine.start(), 0};
}

MachineState step_machine(const RegisterMachine& machine, MachineState state,
                          BranchChooser& chooser) {
  if (state.current == machine.halt()) throw SimulationError("machine has already halted");
  const auto& ins = machine.program()[state.current];
  if (const auto* add = std::get_if<Add>(&ins.op)) {
    ++state.registers[add->reg - 1];
    const bool second = add->next != add->alt && chooser.pick() == 1;
    state.current = second ? machine.second_target(state.current) : machine.first_target(state.current);
  } else if (const auto* sub = std::get_if<Sub>(&ins.op)) {
    auto& r = state.registers[sub->reg - 1];
    if (r > 0) {
      --r;
      state.current = machine.first_target(state.current);
    } else {
      state.current = machine.second_target(state.current);
    }
  }
  ++state.steps;
  return state;
}

std::optional<std::uint64_t> run_generate(const RegisterMachine& machine, std::int64_t max_steps,
                                          BranchChooser& chooser) {
  if (max_steps <= 0) throw SimulationError("max_steps must be positive");
  MachineState s = initial_state(machine);
  while (s.current != machine.halt()) {
    if (s.steps >= static_cast<std::uint64_t>(max_steps)) return std::nullopt;
    s = step_machine(machine, std::move(s), chooser);
  }
  return s.registers[0];
}

AcceptVerdict run_accept(const RegisterMachine& machine,
                         std::span<const std::uint64_t> initial_registers,
                         std::int64_t max_steps, bool strict) {
  if (max_steps <= 0) throw SimulationError("max_steps must be positive");
  if (!machine.deterministic()) throw SimulationError("accepting mode needs a deterministic machine");
  if (initial_registers.size() > machine.registers()) {
    throw SimulationError("got " + std::to_string(initial_registers.size()) +
                          " register values for a machine with " +
                          std::to_string(machine.registers()) + " registers");
  }
  AcceptVerdict v;
  v.final_state = initial_state(machine);
  std::copy(initial_registers.begin(), initial_registers.end(), v.final_state.registers.begin());
  BranchChooser chooser;
  auto& s = v.final_state;
  while (s.current != machine.halt() && s.steps < static_cast<std::uint64_t>(max_steps)) {
    s = step_machine(machine, std::move(s), chooser);
  }
  v.halted = s.current == machine.halt();
  v.accepted = v.halted;
  if (strict && v.halted) {
    v.accepted = std::all_of(s.registers.begin(), s.registers.end(),
                             [](std::uint64_t r) { return r == 0; });
  }
  return v;
}

}  // namespace snp::rm

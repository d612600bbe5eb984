#pragma once

// Random inputs shared by unit and acceptance tests.

#include <random>
#include <string>

#include "snp/system.hpp"

namespace gen {

inline snp::SystemDef random_system_def(std::mt19937_64& rng, int index) {
  static const char* guards[] = {"a", "a^2", "a+", "a(aa)*", "(aaa)*|a^2", "a^3", "(a|a^2)+a"};
  snp::SystemDef def;
  def.name = "g" + std::to_string(index);
  def.mode = rng() % 2 ? snp::Mode::Exhaustive : snp::Mode::Standard;
  const std::size_t n = 1 + rng() % 5;
  for (std::size_t k = 0; k < n; ++k) {
    snp::NeuronDef neuron{"n" + std::to_string(k), rng() % 7, {}};
    for (std::uint64_t r = rng() % 4; r > 0; --r) {
      neuron.rules.push_back(
          snp::RuleDef::make(guards[rng() % 7], 1 + rng() % 3, rng() % 3, rng() % 3));
    }
    if (rng() % 3 == 0) neuron.rules.push_back(snp::RuleDef::bare(1 + rng() % 4, rng() % 2));
    def.neurons.push_back(std::move(neuron));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && rng() % 2) def.synapses.push_back({def.neurons[a].name, def.neurons[b].name});
    }
  }
  if (rng() % 2) def.inputs = {def.neurons[0].name};
  if (rng() % 2) def.output = def.neurons[n - 1].name;
  return def;
}

}  // namespace gen

#pragma once

// Line-oriented text format for SN P systems:
//
//   system <name>
//   mode (standard|exhaustive)
//   neuron <name> spikes <n>
//     rule <guard> [/ a^<b>] -> (a^<p>|a|lambda) [; <d>]
//   syn <from> <to>
//   input <name> [<name> ...]
//   output <name>
//
// `#` starts a comment. A rule without `/ a^b` must have a guard denoting a
// single count k, and then consumes all k spikes.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snp/system.hpp"

namespace snp {

struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct SourceSystem {
  System system;
  SourceSpan system_span;
  std::map<std::string, SourceSpan> neuron_spans;
  std::vector<std::vector<SourceSpan>> rule_spans;  // per neuron, per rule
  std::vector<SourceSpan> synapse_spans;            // in declaration order
};

/// Parses and validates. Throws ParseError (with line/column) or ValidationError.
SourceSystem parse_system(std::string_view text, std::size_t guard_size_cap = kDefaultGuardSizeCap);

/// Parses without validating.
SystemDef parse_system_def(std::string_view text, std::size_t guard_size_cap = kDefaultGuardSizeCap);

/// Canonical text. parse_system_def(render_system(d)) == d.
std::string render_system(const SystemDef& def);
std::string render_rule(const RuleDef& rule);

/// Graphviz digraph with one node per neuron and one edge per synapse.
std::string export_dot(const SystemDef& def);

}  // namespace snp

#include "snp/lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "snp/error.hpp"

namespace snp {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string_view trim(std::string_view s, std::size_t* offset = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (offset) *offset += b;
  return s.substr(b, e - b);
}

class SystemParser {
 public:
  SystemParser(std::string_view text, std::size_t cap) : text_(text), cap_(cap) {}

  SourceSystem parse_validated() {
    SystemDef def = parse();
    SourceSystem src{validate_system(std::move(def)), system_span_, std::move(neuron_spans_),
                     std::move(rule_spans_), std::move(synapse_spans_)};
    return src;
  }

  SystemDef parse() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view line = text_.substr(pos, nl - pos);
      ++line_no;
      line_ = line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      parse_line(line);
      pos = nl + 1;
    }
    return std::move(def_);
  }

 private:
  void parse_line(std::string_view line) {
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    std::string_view kw = tokens[0].text;
    if (kw == "system") {
      expect_count(tokens, 2, "system <name>");
      if (seen_system_) fail("duplicate 'system' declaration", tokens[0].column);
      seen_system_ = true;
      def_.name = identifier(tokens[1]);
      system_span_ = {line_, tokens[0].column};
    } else if (kw == "mode") {
      expect_count(tokens, 2, "mode (standard|exhaustive)");
      auto mode = parse_mode(tokens[1].text);
      if (!mode) fail("unknown mode '" + std::string(tokens[1].text) + "'", tokens[1].column);
      def_.mode = *mode;
    } else if (kw == "neuron") {
      if (tokens.size() != 2 && tokens.size() != 4) {
        fail("expected: neuron <name> spikes <n>", tokens[0].column);
      }
      NeuronDef n;
      n.name = identifier(tokens[1]);
      if (tokens.size() == 4) {
        if (tokens[2].text != "spikes") fail("expected 'spikes'", tokens[2].column);
        n.initial_spikes = number(tokens[3]);
      }
      neuron_spans_.emplace(n.name, SourceSpan{line_, tokens[0].column});
      def_.neurons.push_back(std::move(n));
      rule_spans_.emplace_back();
    } else if (kw == "rule") {
      if (def_.neurons.empty()) fail("rule outside of a neuron declaration", tokens[0].column);
      std::size_t body_col = tokens[0].column + kw.size();
      std::string_view body = line.substr(body_col - 1);
      def_.neurons.back().rules.push_back(parse_rule(body, body_col));
      rule_spans_.back().push_back({line_, tokens[0].column});
    } else if (kw == "syn") {
      expect_count(tokens, 3, "syn <from> <to>");
      def_.synapses.push_back({identifier(tokens[1]), identifier(tokens[2])});
      synapse_spans_.push_back({line_, tokens[0].column});
    } else if (kw == "input") {
      if (tokens.size() < 2) fail("expected: input <name> [<name> ...]", tokens[0].column);
      for (std::size_t i = 1; i < tokens.size(); ++i) def_.inputs.push_back(identifier(tokens[i]));
    } else if (kw == "output") {
      expect_count(tokens, 2, "output <name>");
      if (def_.output) fail("duplicate 'output' declaration", tokens[0].column);
      def_.output = identifier(tokens[1]);
    } else {
      fail("unknown declaration '" + std::string(kw) + "'", tokens[0].column);
    }
  }

  // body: text after the `rule` keyword; col: its 1-based column.
  RuleDef parse_rule(std::string_view body, std::size_t col) {
    std::size_t arrow = body.find("->");
    if (arrow == std::string_view::npos) fail("rule is missing '->'", col);
    std::string_view lhs = body.substr(0, arrow);
    std::string_view rhs = body.substr(arrow + 2);
    std::size_t rhs_col = col + arrow + 2;

    std::string_view guard_text = lhs;
    std::optional<std::uint64_t> consume;
    if (auto slash = lhs.find('/'); slash != std::string_view::npos) {
      guard_text = lhs.substr(0, slash);
      std::size_t c_col = col + slash + 1;
      std::string_view c = trim(lhs.substr(slash + 1), &c_col);
      consume = spike_power(c, c_col, "consumed amount");
      if (*consume == 0) fail("a rule must consume at least one spike", c_col);
    }
    std::size_t guard_col = col;
    guard_text = trim(guard_text, &guard_col);
    if (guard_text.empty()) fail("rule is missing its guard", guard_col);

    RuleDef rule;
    try {
      rule.guard_expr = parse_spike_expr(guard_text);
      rule.guard = compile(rule.guard_expr, cap_);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
      fail(msg, guard_col + (e.column() ? e.column() - 1 : 0));
    } catch (const SizeCapExceeded& e) {
      fail(e.what(), guard_col);
    }

    if (consume) {
      rule.consume = *consume;
    } else {
      auto only = rule.guard.singleton();
      if (!only || *only == 0) {
        fail("guard without '/ a^b' must denote a single positive spike count", guard_col);
      }
      rule.consume = *only;
    }

    std::string_view produce_text = rhs;
    if (auto semi = rhs.find(';'); semi != std::string_view::npos) {
      produce_text = rhs.substr(0, semi);
      std::size_t d_col = rhs_col + semi + 1;
      std::string_view d = trim(rhs.substr(semi + 1), &d_col);
      if (d.empty()) fail("missing delay after ';'", d_col);
      rule.delay = number({d, d_col});
    }
    std::size_t p_col = rhs_col;
    produce_text = trim(produce_text, &p_col);
    if (produce_text == "lambda") {
      rule.produce = 0;
    } else {
      rule.produce = spike_power(produce_text, p_col, "produced amount");
    }
    return rule;
  }

  // `a` or `a^k`.
  std::uint64_t spike_power(std::string_view s, std::size_t col, std::string_view what) {
    if (s == "a") return 1;
    if (s.size() > 2 && s[0] == 'a' && s[1] == '^') return number({s.substr(2), col + 2});
    fail("expected a or a^<n> for the " + std::string(what), col);
  }

  std::uint64_t number(Token t) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      fail("expected a non-negative integer, got '" + std::string(t.text) + "'", t.column);
    }
    return v;
  }

  std::string identifier(Token t) {
    if (!is_identifier(t.text)) fail("invalid identifier '" + std::string(t.text) + "'", t.column);
    return std::string(t.text);
  }

  void expect_count(const std::vector<Token>& tokens, std::size_t n, std::string_view usage) {
    if (tokens.size() != n) fail("expected: " + std::string(usage), tokens[0].column);
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t column) const {
    throw ParseError(msg, line_, column);
  }

  std::string_view text_;
  std::size_t cap_;
  std::size_t line_ = 0;
  bool seen_system_ = false;
  SystemDef def_;
  SourceSpan system_span_;
  std::map<std::string, SourceSpan> neuron_spans_;
  std::vector<std::vector<SourceSpan>> rule_spans_;
  std::vector<SourceSpan> synapse_spans_;
};

std::string spikes_text(std::uint64_t n) { return n == 1 ? "a" : "a^" + std::to_string(n); }

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

SourceSystem parse_system(std::string_view text, std::size_t guard_size_cap) {
  return SystemParser(text, guard_size_cap).parse_validated();
}

SystemDef parse_system_def(std::string_view text, std::size_t guard_size_cap) {
  return SystemParser(text, guard_size_cap).parse();
}

std::string render_rule(const RuleDef& rule) {
  std::string out = render_spike_expr(rule.guard_expr);
  if (rule.guard.singleton() != rule.consume) out += " / " + spikes_text(rule.consume);
  out += " -> ";
  out += rule.produce == 0 ? "lambda" : spikes_text(rule.produce);
  if (rule.delay != 0) out += " ; " + std::to_string(rule.delay);
  return out;
}

std::string render_system(const SystemDef& def) {
  std::ostringstream out;
  out << "system " << def.name << '\n';
  out << "mode " << to_string(def.mode) << '\n';
  for (const auto& n : def.neurons) {
    out << "neuron " << n.name << " spikes " << n.initial_spikes << '\n';
    for (const auto& r : n.rules) out << "  rule " << render_rule(r) << '\n';
  }
  std::set<Synapse> synapses(def.synapses.begin(), def.synapses.end());
  for (const auto& s : synapses) out << "syn " << s.from << ' ' << s.to << '\n';
  if (!def.inputs.empty()) {
    out << "input";
    for (const auto& i : def.inputs) out << ' ' << i;
    out << '\n';
  }
  if (def.output) out << "output " << *def.output << '\n';
  return out.str();
}

std::string export_dot(const SystemDef& def) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(def.name) << "\" {\n";
  for (const auto& n : def.neurons) {
    std::string label = n.name + "\\nspikes=" + std::to_string(n.initial_spikes);
    for (const auto& r : n.rules) label += "\\n" + dot_escape(render_rule(r));
    out << "  \"" << dot_escape(n.name) << "\" [label=\"" << label << "\"";
    const bool in = std::find(def.inputs.begin(), def.inputs.end(), n.name) != def.inputs.end();
    const bool is_out = def.output == n.name;
    if (in && is_out) {
      out << ", xlabel=\"in/out\", peripheries=2";
    } else if (in) {
      out << ", xlabel=\"in\"";
    } else if (is_out) {
      out << ", xlabel=\"out\", peripheries=2";
    }
    out << "];\n";
  }
  std::set<Synapse> synapses(def.synapses.begin(), def.synapses.end());
  for (const auto& s : synapses) {
    out << "  \"" << dot_escape(s.from) << "\" -> \"" << dot_escape(s.to) << "\";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace snp

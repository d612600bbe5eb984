#include "snp/spike_regex.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "snp/error.hpp"

namespace snp {

SpikeExpr SpikeExpr::atom() { return SpikeExpr{}; }

SpikeExpr SpikeExpr::power(SpikeExpr base, std::uint32_t k) {
  SpikeExpr e;
  e.kind = Kind::Power;
  e.exponent = k;
  e.children.push_back(std::move(base));
  return e;
}

SpikeExpr SpikeExpr::concat(std::vector<SpikeExpr> parts) {
  SpikeExpr e;
  e.kind = Kind::Concat;
  e.children = std::move(parts);
  return e;
}

SpikeExpr SpikeExpr::alt(std::vector<SpikeExpr> parts) {
  SpikeExpr e;
  e.kind = Kind::Union;
  e.children = std::move(parts);
  return e;
}

SpikeExpr SpikeExpr::star(SpikeExpr inner) {
  SpikeExpr e;
  e.kind = Kind::Star;
  e.children.push_back(std::move(inner));
  return e;
}

SpikeExpr SpikeExpr::plus(SpikeExpr inner) {
  SpikeExpr e;
  e.kind = Kind::Plus;
  e.children.push_back(std::move(inner));
  return e;
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  SpikeExpr parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    SpikeExpr e = parse_union();
    skip_space();
    if (!at_end()) {
      if (peek() == ')') fail("unbalanced ')'");
      fail(std::string("unexpected '") + peek() + "'");
    }
    return e;
  }

 private:
  SpikeExpr parse_union() {
    std::vector<SpikeExpr> parts;
    parts.push_back(parse_concat());
    skip_space();
    while (!at_end() && peek() == '|') {
      ++pos_;
      parts.push_back(parse_concat());
      skip_space();
    }
    if (parts.size() == 1) return std::move(parts.front());
    return SpikeExpr::alt(std::move(parts));
  }

  SpikeExpr parse_concat() {
    std::vector<SpikeExpr> parts;
    skip_space();
    while (!at_end() && (peek() == 'a' || peek() == '(')) {
      parts.push_back(parse_postfix());
      skip_space();
    }
    if (parts.empty()) {
      if (at_end()) fail("expected 'a' or '(' before end of expression");
      fail(std::string("expected 'a' or '(' but found '") + peek() + "'");
    }
    if (parts.size() == 1) return std::move(parts.front());
    return SpikeExpr::concat(std::move(parts));
  }

  SpikeExpr parse_postfix() {
    SpikeExpr e = parse_primary();
    for (;;) {
      skip_space();
      if (at_end()) break;
      char c = peek();
      if (c == '*') {
        ++pos_;
        e = SpikeExpr::star(std::move(e));
      } else if (c == '+') {
        ++pos_;
        e = SpikeExpr::plus(std::move(e));
      } else if (c == '^') {
        ++pos_;
        e = SpikeExpr::power(std::move(e), parse_exponent());
      } else {
        break;
      }
    }
    return e;
  }

  SpikeExpr parse_primary() {
    if (peek() == 'a') {
      ++pos_;
      return SpikeExpr::atom();
    }
    std::size_t open = pos_;
    ++pos_;  // '('
    skip_space();
    if (!at_end() && peek() == ')') fail("empty parentheses");
    SpikeExpr inner = parse_union();
    skip_space();
    if (at_end() || peek() != ')') {
      pos_ = open;
      fail("unbalanced '('");
    }
    ++pos_;
    return inner;
  }

  std::uint32_t parse_exponent() {
    skip_space();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("exponent must be a non-negative integer");
    }
    std::uint64_t value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) fail("exponent too large");
      ++pos_;
    }
    return static_cast<std::uint32_t>(value);
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("guard: " + what, 0, pos_ + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_into(const SpikeExpr& e, std::string& out) {
  using K = SpikeExpr::Kind;
  auto wrapped = [&out](const SpikeExpr& child, bool parens) {
    if (parens) out += '(';
    render_into(child, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case K::Atom:
      out += 'a';
      break;
    case K::Power:
    case K::Star:
    case K::Plus: {
      const SpikeExpr& inner = e.children.front();
      wrapped(inner, inner.kind == K::Concat || inner.kind == K::Union);
      if (e.kind == K::Power) {
        out += '^';
        out += std::to_string(e.exponent);
      } else {
        out += e.kind == K::Star ? '*' : '+';
      }
      break;
    }
    case K::Concat:
      for (const auto& child : e.children) {
        wrapped(child, child.kind == K::Concat || child.kind == K::Union);
      }
      break;
    case K::Union:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += '|';
        wrapped(e.children[i], e.children[i].kind == K::Union);
      }
      break;
  }
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b
             ? std::numeric_limits<std::size_t>::max()
             : a + b;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

// Thompson NFA over the single letter `a`.
struct Nfa {
  struct State {
    std::vector<std::size_t> eps;
    std::vector<std::size_t> on_a;
  };
  std::vector<State> states;

  std::size_t add() {
    states.emplace_back();
    return states.size() - 1;
  }

  struct Fragment {
    std::size_t start;
    std::size_t accept;
  };

  Fragment build(const SpikeExpr& e) {
    using K = SpikeExpr::Kind;
    switch (e.kind) {
      case K::Atom: {
        Fragment f{add(), add()};
        states[f.start].on_a.push_back(f.accept);
        return f;
      }
      case K::Power: {
        if (e.exponent == 0) {
          Fragment f{add(), add()};
          states[f.start].eps.push_back(f.accept);
          return f;
        }
        Fragment whole = build(e.children.front());
        for (std::uint32_t i = 1; i < e.exponent; ++i) {
          Fragment next = build(e.children.front());
          states[whole.accept].eps.push_back(next.start);
          whole.accept = next.accept;
        }
        return whole;
      }
      case K::Concat: {
        Fragment whole = build(e.children.front());
        for (std::size_t i = 1; i < e.children.size(); ++i) {
          Fragment next = build(e.children[i]);
          states[whole.accept].eps.push_back(next.start);
          whole.accept = next.accept;
        }
        return whole;
      }
      case K::Union: {
        Fragment f{add(), add()};
        for (const auto& child : e.children) {
          Fragment c = build(child);
          states[f.start].eps.push_back(c.start);
          states[c.accept].eps.push_back(f.accept);
        }
        return f;
      }
      case K::Star:
      case K::Plus: {
        Fragment f{add(), add()};
        Fragment inner = build(e.children.front());
        states[f.start].eps.push_back(inner.start);
        states[inner.accept].eps.push_back(inner.start);
        states[inner.accept].eps.push_back(f.accept);
        if (e.kind == K::Star) states[f.start].eps.push_back(f.accept);
        return f;
      }
    }
    return {0, 0};
  }
};

using StateBits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const StateBits& bits) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto w : bits) {
      h ^= std::hash<std::uint64_t>{}(w);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Upper bound on the prefix-plus-cycle length of the state-set sequence.
constexpr std::size_t kMaxSubsetSequence = std::size_t{1} << 18;

}  // namespace

SpikeExpr parse_spike_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string render_spike_expr(const SpikeExpr& expr) {
  std::string out;
  render_into(expr, out);
  return out;
}

std::size_t expanded_size(const SpikeExpr& e) {
  using K = SpikeExpr::Kind;
  switch (e.kind) {
    case K::Atom:
      return 1;
    case K::Power:
      return saturating_add(1, saturating_mul(e.exponent, expanded_size(e.children.front())));
    default: {
      std::size_t total = 1;
      for (const auto& c : e.children) total = saturating_add(total, expanded_size(c));
      return total;
    }
  }
}

SpikeSet::SpikeSet(std::uint64_t threshold, std::uint64_t period, std::vector<bool> table)
    : threshold_(threshold), period_(period), table_(std::move(table)) {
  if (period_ == 0 || table_.size() != threshold_ + period_) {
    throw std::invalid_argument("SpikeSet: table length must equal threshold + period");
  }
}

bool SpikeSet::finite() const noexcept {
  return std::none_of(table_.begin() + static_cast<std::ptrdiff_t>(threshold_), table_.end(),
                      [](bool b) { return b; });
}

std::optional<std::uint64_t> SpikeSet::singleton() const {
  if (!finite()) return std::nullopt;
  std::optional<std::uint64_t> found;
  for (std::uint64_t i = 0; i < threshold_; ++i) {
    if (!table_[i]) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

SpikeSet compile(const SpikeExpr& expr, std::size_t size_cap) {
  const std::size_t size = expanded_size(expr);
  if (size > size_cap) {
    throw SizeCapExceeded("guard expression has " + std::to_string(size) +
                          " nodes after expansion; cap is " + std::to_string(size_cap));
  }

  Nfa nfa;
  const Nfa::Fragment top = nfa.build(expr);
  const std::size_t n = nfa.states.size();
  const std::size_t words = (n + 63) / 64;

  auto test = [](const StateBits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; };
  auto set = [](StateBits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); };

  std::vector<std::size_t> stack;
  auto close = [&](StateBits& bits) {
    stack.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (test(bits, i)) stack.push_back(i);
    }
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t t : nfa.states[s].eps) {
        if (!test(bits, t)) {
          set(bits, t);
          stack.push_back(t);
        }
      }
    }
  };

  StateBits current(words, 0);
  set(current, top.start);
  close(current);

  std::unordered_map<StateBits, std::size_t, BitsHash> seen;
  std::vector<bool> table;
  for (;;) {
    auto [it, inserted] = seen.emplace(current, table.size());
    if (!inserted) {
      const std::uint64_t threshold = it->second;
      const std::uint64_t period = table.size() - it->second;
      return SpikeSet(threshold, period, std::move(table));
    }
    if (table.size() >= kMaxSubsetSequence) {
      throw SizeCapExceeded("guard language has no period within " +
                            std::to_string(kMaxSubsetSequence) + " steps");
    }
    table.push_back(test(current, top.accept) != 0);

    StateBits next(words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!test(current, i)) continue;
      for (std::size_t t : nfa.states[i].on_a) set(next, t);
    }
    close(next);
    current = std::move(next);
  }
}

}  // namespace snp

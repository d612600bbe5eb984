#pragma once

// Regular expressions over the one-letter spike alphabet {a} and their
// compiled, eventually periodic form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snp {

struct SpikeExpr {
  enum class Kind { Atom, Power, Concat, Union, Star, Plus };

  Kind kind = Kind::Atom;
  std::uint32_t exponent = 0;  // Power only
  std::vector<SpikeExpr> children;

  static SpikeExpr atom();
  static SpikeExpr power(SpikeExpr base, std::uint32_t k);
  static SpikeExpr concat(std::vector<SpikeExpr> parts);
  static SpikeExpr alt(std::vector<SpikeExpr> parts);
  static SpikeExpr star(SpikeExpr inner);
  static SpikeExpr plus(SpikeExpr inner);

  friend bool operator==(const SpikeExpr&, const SpikeExpr&) = default;
};

/// Parses `a`, postfix `*` `+` `^k`, juxtaposition, `|` and parentheses.
/// Whitespace is ignored. Throws ParseError with a 1-based column.
SpikeExpr parse_spike_expr(std::string_view text);

/// Canonical text; parse_spike_expr(render_spike_expr(e)) == e.
std::string render_spike_expr(const SpikeExpr& expr);

/// Node count with `^k` expanded to k copies (saturating).
std::size_t expanded_size(const SpikeExpr& expr);

inline constexpr std::size_t kDefaultGuardSizeCap = 256;

/// Eventually periodic subset of the naturals:
/// contains(n) = table[n] for n < T, table[T + (n - T) mod P] otherwise.
class SpikeSet {
 public:
  SpikeSet() = default;
  SpikeSet(std::uint64_t threshold, std::uint64_t period, std::vector<bool> table);

  bool contains(std::uint64_t n) const noexcept {
    if (n < threshold_) return table_[n];
    return table_[threshold_ + (n - threshold_) % period_];
  }

  std::uint64_t threshold() const noexcept { return threshold_; }
  std::uint64_t period() const noexcept { return period_; }
  const std::vector<bool>& table() const noexcept { return table_; }

  /// True when the set has no element at or beyond the threshold.
  bool finite() const noexcept;
  /// The single element, if the set has exactly one.
  std::optional<std::uint64_t> singleton() const;

  friend bool operator==(const SpikeSet&, const SpikeSet&) = default;

 private:
  std::uint64_t threshold_ = 0;
  std::uint64_t period_ = 1;
  std::vector<bool> table_ = {false};
};

/// Compiles via a Thompson NFA and cycle detection on the reachable
/// state-set sequence. Throws SizeCapExceeded when expanded_size(expr)
/// exceeds `size_cap` or the cycle is unreasonably long.
SpikeSet compile(const SpikeExpr& expr, std::size_t size_cap = kDefaultGuardSizeCap);

inline bool contains(const SpikeSet& set, std::uint64_t n) { return set.contains(n); }

}  // namespace snp

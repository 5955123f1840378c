#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mss/hierarchy.hpp"

namespace mss {

enum class Metaphor : std::uint8_t { node_link, matrix, metrics_series, animation };

std::string_view to_string(Metaphor m);
std::optional<Metaphor> parse_metaphor(std::string_view s);

struct SnapshotView {
  Interval interval;
  Metaphor metaphor = Metaphor::node_link;
  /// Abstracted views stay in the state and are drawn as a colored rectangle.
  bool abstracted = false;

  friend bool operator==(const SnapshotView&, const SnapshotView&) = default;
};

struct ViewState {
  std::vector<SnapshotView> views;
  std::uint32_t max_levels = 4;
  std::uint32_t per_level_budget = 6;
  std::string color_metric = "density";

  /// Levels that still have a non-abstracted view, ascending.
  std::vector<std::uint32_t> visible_levels() const;
  std::size_t visible_count(std::uint32_t level) const;

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

/// Fraction of `iv` covered by the union of `others`.
double coverage_fraction(const Interval& iv, const std::vector<Interval>& others);

/// Decides which views to abstract. Existing abstractions are kept.
///
/// 1. While more than max_levels levels are visible, every view on the
///    coarsest visible level is abstracted.
/// 2. Levels are visited coarse to fine. A view whose interval is covered for
///    more than half its length by non-abstracted views on finer levels is
///    abstracted; if the level still holds more than per_level_budget visible
///    views, the remaining ones are abstracted by decreasing covered length,
///    ties by earlier start.
/// Throws std::invalid_argument if a view does not name an interval of `h`.
ViewState auto_abstract(const ViewState& state, const SnapshotHierarchy& h);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  std::string hex() const;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kLowColor{0xDE, 0xEB, 0xF7};
inline constexpr Rgb kHighColor{0x08, 0x51, 0x9C};

/// Linear light-to-dark blue scale; value is clamped to [lo, hi] and lo == hi
/// maps to the light end. Throws std::invalid_argument if lo > hi.
Rgb metric_color(double value, double lo, double hi);

}  // namespace mss

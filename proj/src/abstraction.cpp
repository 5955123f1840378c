#include "mss/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace mss {
namespace {

constexpr std::pair<Metaphor, std::string_view> kMetaphors[] = {
    {Metaphor::node_link, "node_link"},
    {Metaphor::matrix, "matrix"},
    {Metaphor::metrics_series, "metrics_series"},
    {Metaphor::animation, "animation"},
};

std::uint32_t covered_length(const Interval& iv, std::vector<Interval> others) {
  std::sort(others.begin(), others.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::uint32_t covered = 0;
  std::uint32_t cursor = iv.start;
  for (const Interval& o : others) {
    const std::uint32_t lo = std::max(cursor, o.start);
    const std::uint32_t hi = std::min(iv.end, o.end);
    if (hi > lo) {
      covered += hi - lo;
      cursor = hi;
    }
  }
  return covered;
}

std::vector<Interval> finer_visible(const ViewState& s, std::uint32_t level) {
  std::vector<Interval> out;
  for (const auto& v : s.views)
    if (!v.abstracted && v.interval.level < level) out.push_back(v.interval);
  return out;
}

}  // namespace

std::string_view to_string(Metaphor m) {
  for (const auto& [v, name] : kMetaphors)
    if (v == m) return name;
  return "node_link";
}

std::optional<Metaphor> parse_metaphor(std::string_view s) {
  for (const auto& [v, name] : kMetaphors)
    if (name == s) return v;
  return std::nullopt;
}

std::vector<std::uint32_t> ViewState::visible_levels() const {
  std::vector<std::uint32_t> out;
  for (const auto& v : views)
    if (!v.abstracted) out.push_back(v.interval.level);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t ViewState::visible_count(std::uint32_t level) const {
  return static_cast<std::size_t>(std::count_if(views.begin(), views.end(), [level](const SnapshotView& v) {
    return !v.abstracted && v.interval.level == level;
  }));
}

double coverage_fraction(const Interval& iv, const std::vector<Interval>& others) {
  if (iv.length() == 0) return 0.0;
  return static_cast<double>(covered_length(iv, others)) / static_cast<double>(iv.length());
}

ViewState auto_abstract(const ViewState& state, const SnapshotHierarchy& h) {
  for (const auto& v : state.views) {
    const Interval& iv = v.interval;
    if (!h.contains(iv.level, iv.index) || h.at(iv.level, iv.index) != iv)
      throw std::invalid_argument("view references an interval outside the hierarchy");
  }
  ViewState out = state;

  auto levels = out.visible_levels();
  while (levels.size() > out.max_levels) {
    const auto coarsest = levels.back();
    for (auto& v : out.views)
      if (v.interval.level == coarsest) v.abstracted = true;
    levels.pop_back();
  }

  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const std::uint32_t level = *it;
    const auto finer = finer_visible(out, level);
    std::vector<std::pair<std::uint32_t, std::size_t>> candidates;  // (covered length, view)
    for (std::size_t i = 0; i < out.views.size(); ++i) {
      auto& v = out.views[i];
      if (v.abstracted || v.interval.level != level) continue;
      const auto covered = covered_length(v.interval, finer);
      if (2 * covered > v.interval.length())
        v.abstracted = true;
      else
        candidates.emplace_back(covered, i);
    }
    if (candidates.size() <= out.per_level_budget) continue;
    std::sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      const auto& ia = out.views[a.second].interval;
      const auto& ib = out.views[b.second].interval;
      if (ia.start != ib.start) return ia.start < ib.start;
      return a.second < b.second;
    });
    const std::size_t excess = candidates.size() - out.per_level_budget;
    for (std::size_t i = 0; i < excess; ++i) out.views[candidates[i].second].abstracted = true;
  }
  return out;
}

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

Rgb metric_color(double value, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("metric_color: lo must not exceed hi");
  double t = 0.0;
  if (hi > lo) t = std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
  if (std::isnan(t)) t = 0.0;
  auto mixc = [t](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * t));
  };
  return {mixc(kLowColor.r, kHighColor.r), mixc(kLowColor.g, kHighColor.g), mixc(kLowColor.b, kHighColor.b)};
}

}  // namespace mss

#include "mss/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <stdexcept>

#include "mss/errors.hpp"

namespace mss {
namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_index(std::string_view ref) {
  return !ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::size_t> resolve(const std::string& ref, const std::vector<std::string_view>& header,
                                   const char* role, bool mandatory) {
  if (ref.empty()) {
    if (mandatory) throw SchemaError(std::string("missing mandatory column: ") + role);
    return std::nullopt;
  }
  if (is_index(ref)) return std::stoul(ref);
  if (header.empty()) throw SchemaError(std::string("column name '") + ref + "' for " + role + " requires a header row");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == ref) return i;
  throw SchemaError(std::string("column '") + ref + "' for " + role + " not found in header");
}

std::optional<Sign> parse_sign(std::string_view s) {
  s = trim(s);
  if (s.empty() || s == "0" || s == "none") return Sign::none;
  if (s == "1" || s == "+1" || s == "positive" || s == "pos") return Sign::positive;
  if (s == "-1" || s == "negative" || s == "neg") return Sign::negative;
  return std::nullopt;
}

}  // namespace

ParseResult parse_edge_stream(std::istream& in, const EdgeSchema& schema) {
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  std::string header_line;
  std::vector<std::string_view> header;
  if (schema.header) {
    while (std::getline(in, header_line)) {
      ++lineno;
      if (!trim(header_line).empty()) break;
    }
    header = split(header_line, schema.delimiter);
  }
  const std::size_t src = *resolve(schema.source, header, "source", true);
  const std::size_t dst = *resolve(schema.target, header, "target", true);
  const std::size_t ts = *resolve(schema.timestamp, header, "timestamp", true);
  const auto wcol = resolve(schema.weight, header, "weight", false);
  const auto scol = resolve(schema.sign, header, "sign", false);
  std::size_t needed = std::max({src, dst, ts});
  if (wcol) needed = std::max(needed, *wcol);
  if (scol) needed = std::max(needed, *scol);

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(line, schema.delimiter);
    auto fail = [&](std::string msg) { result.errors.push_back({lineno, std::move(msg)}); };
    if (cols.size() <= needed) {
      fail("expected at least " + std::to_string(needed + 1) + " columns, found " + std::to_string(cols.size()));
      continue;
    }
    TimestampedEdge e;
    e.source = std::string(trim(cols[src]));
    e.target = std::string(trim(cols[dst]));
    if (e.source.empty() || e.target.empty()) {
      fail("empty node id");
      continue;
    }
    const auto tsv = trim(cols[ts]);
    auto [p, ec] = std::from_chars(tsv.data(), tsv.data() + tsv.size(), e.timestamp);
    if (ec != std::errc() || p != tsv.data() + tsv.size() || e.timestamp < 0) {
      fail("unparseable timestamp '" + std::string(tsv) + "'");
      continue;
    }
    if (wcol) {
      const std::string wv(trim(cols[*wcol]));
      try {
        std::size_t used = 0;
        e.weight = std::stod(wv, &used);
        if (used != wv.size()) throw std::invalid_argument(wv);
      } catch (const std::exception&) {
        fail("unparseable weight '" + wv + "'");
        continue;
      }
    }
    if (scol) {
      const auto s = parse_sign(cols[*scol]);
      if (!s) {
        fail("unparseable sign '" + std::string(trim(cols[*scol])) + "'");
        continue;
      }
      e.sign = *s;
    }
    result.edges.push_back(std::move(e));
  }
  return result;
}

DynamicGraph bucket_by_hour(const std::vector<TimestampedEdge>& edges, std::int64_t width) {
  if (edges.empty()) throw std::invalid_argument("bucket_by_hour: empty edge list has no time origin");
  if (width <= 0) throw std::invalid_argument("bucket_by_hour: bucket width must be positive");

  const auto [lo, hi] = std::minmax_element(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  const std::int64_t origin = lo->timestamp;
  const auto buckets = static_cast<std::size_t>((hi->timestamp - origin) / width + 1);

  // Sorted interning keeps ids independent of input order.
  std::vector<std::string_view> names;
  names.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.source == e.target) continue;
    names.push_back(e.source);
    names.push_back(e.target);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  DynamicGraph dg;
  dg.bucket_width = width;
  dg.origin = origin;
  for (auto n : names) dg.dictionary.intern(n);

  std::vector<GraphBuilder> builders(buckets);
  for (const auto& e : edges) {
    if (e.source == e.target) continue;
    const auto b = static_cast<std::size_t>((e.timestamp - origin) / width);
    builders[b].add_edge(*dg.dictionary.find(e.source), *dg.dictionary.find(e.target), e.sign);
  }
  dg.graphs.reserve(buckets);
  for (const auto& b : builders) dg.graphs.push_back(b.build());
  return dg;
}

}  // namespace mss

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

struct TimestampedEdge {
  std::string source;
  std::string target;
  std::int64_t timestamp = 0;
  double weight = 1.0;
  Sign sign = Sign::none;

  friend bool operator==(const TimestampedEdge&, const TimestampedEdge&) = default;
};

/// Column mapping for a delimited edge list. A column reference is either a
/// zero-based index ("2") or, when the input has a header row, a column name.
/// Empty weight/sign references mean the column is absent.
struct EdgeSchema {
  char delimiter = '\t';
  bool header = false;
  std::string source = "0";
  std::string target = "1";
  std::string timestamp = "2";
  std::string weight;
  std::string sign;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::vector<TimestampedEdge> edges;
  std::vector<LineError> errors;
};

/// Parses one edge per non-blank line. Malformed lines produce a LineError and
/// are skipped; a schema that cannot be resolved throws SchemaError.
ParseResult parse_edge_stream(std::istream& in, const EdgeSchema& schema);

/// Aggregates edges into T = floor((max_ts - min_ts) / width) + 1 buckets.
/// Node names are interned in sorted order so the result does not depend on
/// input order. Throws std::invalid_argument on empty input or width <= 0.
DynamicGraph bucket_by_hour(const std::vector<TimestampedEdge>& edges, std::int64_t width = 3600);

}  // namespace mss

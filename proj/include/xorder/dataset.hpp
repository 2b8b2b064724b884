#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xorder/metrics.hpp"

namespace xorder {

struct ColumnMap {
  std::string id = "id";
  std::string group = "group";
  std::string label = "label";
  std::string score = "score";
};

/// A two-group scored dataset plus the raw CSV fields it came from.
/// `group_a` is the anchor group (scores kept), `group_b` the adjusted one.
struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // raw fields in header order
  std::vector<ScoredSample> samples;           // aligned with rows
  std::string group_a;
  std::string group_b;
  std::string source;
  ColumnMap columns;

  friend bool operator==(const Dataset&, const Dataset&);
};

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Splits one CSV record. Double quotes enclose fields; "" escapes a quote.
std::vector<std::string> split_csv_record(const std::string& line);
std::string join_csv_record(std::span<const std::string> fields);

/// Parses a CSV with a header row. Throws ParseError naming the 1-based line
/// (header is line 1) and the column, and GroupCountError unless exactly two
/// distinct groups occur. Group roles are assigned by `anchor` (a tag, or
/// "auto": group b is the one with the lower PRF).
Dataset parse_csv(std::istream& in, const ColumnMap& columns, const std::string& anchor,
                  const std::string& source = "<stream>");
Dataset ingest_csv(const std::string& path, const ColumnMap& columns,
                   const std::string& anchor = "auto");

/// Like parse_csv, but group roles are copied from `reference` and the test
/// file may not introduce new groups.
Dataset ingest_csv_like(const std::string& path, const Dataset& reference);

/// Assigns group_a / group_b. With "auto", group b is the group with the
/// lower PRF; if PRF is undefined for either group or they are equal, the
/// first group to appear is group a.
void assign_groups(Dataset& data, const std::string& anchor);

/// Writes header and rows; with `adjusted`, appends an adjusted_score column.
void write_csv(std::ostream& out, const Dataset& data,
               std::optional<std::span<const double>> adjusted = std::nullopt);

/// Random split into (train, test) with round(fraction * n) training rows.
/// Rows keep their original relative order inside each part.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double fraction,
                                          std::uint64_t seed);

}  // namespace xorder

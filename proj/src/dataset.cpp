#include "xorder/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/core.h>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError(1, name, "column not found in header");
  return static_cast<std::size_t>(it - header.begin());
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

bool operator==(const Dataset& l, const Dataset& r) {
  if (l.header != r.header || l.rows != r.rows || l.group_a != r.group_a ||
      l.group_b != r.group_b || l.samples.size() != r.samples.size()) {
    return false;
  }
  for (std::size_t i = 0; i < l.samples.size(); ++i) {
    const auto& a = l.samples[i];
    const auto& b = r.samples[i];
    if (a.id != b.id || a.group != b.group || a.label != b.label || a.score != b.score) {
      return false;
    }
  }
  return true;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string join_csv_record(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  return out;
}

Dataset parse_csv(std::istream& in, const ColumnMap& columns, const std::string& anchor,
                  const std::string& source) {
  Dataset data;
  data.source = source;
  data.columns = columns;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "", "missing header row");
  strip_cr(line);
  data.header = split_csv_record(line);
  const std::size_t id_col = column_index(data.header, columns.id);
  const std::size_t group_col = column_index(data.header, columns.group);
  const std::size_t label_col = column_index(data.header, columns.label);
  const std::size_t score_col = column_index(data.header, columns.score);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_record(line);
    if (fields.size() != data.header.size()) {
      throw ParseError(line_no, "", fmt::format("expected {} fields, found {}",
                                                data.header.size(), fields.size()));
    }
    ScoredSample s;
    s.id = fields[id_col];
    s.group = fields[group_col];
    if (s.group.empty()) throw ParseError(line_no, columns.group, "missing value");

    const std::string& label = fields[label_col];
    if (label.empty()) throw ParseError(line_no, columns.label, "missing value");
    long long label_value = 0;
    const auto [lp, lec] = std::from_chars(label.data(), label.data() + label.size(), label_value);
    if (lec != std::errc() || lp != label.data() + label.size()) {
      throw ParseError(line_no, columns.label, "not an integer");
    }
    if (label_value != 0 && label_value != 1) {
      throw ParseError(line_no, columns.label, "out-of-domain (expected 0 or 1)");
    }
    s.label = static_cast<int>(label_value);

    const std::string& score = fields[score_col];
    if (score.empty()) throw ParseError(line_no, columns.score, "missing value");
    const auto [sp, sec] = std::from_chars(score.data(), score.data() + score.size(), s.score);
    if (sec != std::errc() || sp != score.data() + score.size()) {
      throw ParseError(line_no, columns.score, "not a number");
    }
    if (!std::isfinite(s.score)) throw ParseError(line_no, columns.score, "not finite");

    data.samples.push_back(std::move(s));
    data.rows.push_back(std::move(fields));
  }
  assign_groups(data, anchor);
  return data;
}

Dataset ingest_csv(const std::string& path, const ColumnMap& columns, const std::string& anchor) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open '" + path + "'");
  return parse_csv(in, columns, anchor, path);
}

Dataset ingest_csv_like(const std::string& path, const Dataset& reference) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open '" + path + "'");
  // Parse with a fixed anchor so role assignment does not depend on the file.
  Dataset data = parse_csv(in, reference.columns, reference.group_a, path);
  if (data.group_b != reference.group_b) {
    throw GroupCountError("'" + path + "' has groups other than '" + reference.group_a +
                          "' and '" + reference.group_b + "'");
  }
  return data;
}

void assign_groups(Dataset& data, const std::string& anchor) {
  std::vector<std::string> tags;
  for (const auto& s : data.samples) {
    if (std::find(tags.begin(), tags.end(), s.group) == tags.end()) tags.push_back(s.group);
  }
  if (tags.size() != 2) {
    throw GroupCountError(fmt::format("expected exactly 2 groups, found {}", tags.size()));
  }
  if (anchor == "auto") {
    data.group_a = tags[0];
    data.group_b = tags[1];
    const GroupCounts c = count_groups(data.samples, tags[0], tags[1]);
    if (c.n1_a > 0 && c.n1_b > 0 && c.n0() > 0) {
      const Rate prf_first = compute_prf(data.samples, tags[0]);
      const Rate prf_second = compute_prf(data.samples, tags[1]);
      if (prf_first < prf_second) std::swap(data.group_a, data.group_b);
    }
    return;
  }
  if (anchor == tags[0]) {
    data.group_a = tags[0];
    data.group_b = tags[1];
  } else if (anchor == tags[1]) {
    data.group_a = tags[1];
    data.group_b = tags[0];
  } else {
    throw SpecError("anchor group '" + anchor + "' does not occur in the data");
  }
}

void write_csv(std::ostream& out, const Dataset& data,
               std::optional<std::span<const double>> adjusted) {
  if (adjusted && adjusted->size() != data.rows.size()) {
    throw Error("adjusted scores do not match the number of rows");
  }
  std::vector<std::string> header = data.header;
  if (adjusted) header.emplace_back("adjusted_score");
  out << join_csv_record(header) << '\n';
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    if (!adjusted) {
      out << join_csv_record(data.rows[i]) << '\n';
      continue;
    }
    std::vector<std::string> fields = data.rows[i];
    fields.push_back(format_double((*adjusted)[i]));
    out << join_csv_record(fields) << '\n';
  }
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double fraction,
                                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw SpecError("split fraction must be in (0,1)");
  std::vector<std::size_t> idx(data.rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
  std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  auto take = [&](const std::vector<std::size_t>& which) {
    Dataset part;
    part.header = data.header;
    part.group_a = data.group_a;
    part.group_b = data.group_b;
    part.source = data.source;
    part.columns = data.columns;
    for (std::size_t i : which) {
      part.rows.push_back(data.rows[i]);
      part.samples.push_back(data.samples[i]);
    }
    return part;
  };
  return {take(train_idx), take(test_idx)};
}

}  // namespace xorder

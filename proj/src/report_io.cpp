#include "xorder/report_io.hpp"

#include <ostream>
#include <rapidjson/prettywriter.h>
#include <rapidjson/stringbuffer.h>
#include <rapidjson/writer.h>

#include "xorder/dataset.hpp"

namespace xorder {
namespace {

template <typename Writer>
void write_double(Writer& w, double v) {
  const std::string text = format_double(v);
  w.RawValue(text.c_str(), text.size(), rapidjson::kNumberType);
}

template <typename Writer>
void write_optional(Writer& w, const char* key, const std::optional<double>& v) {
  w.Key(key);
  if (v) {
    write_double(w, *v);
  } else {
    w.Null();
  }
}

template <typename Writer>
void write_strings(Writer& w, const char* key, const std::vector<std::string>& items) {
  w.Key(key);
  w.StartArray();
  for (const auto& s : items) w.String(s.c_str(), static_cast<rapidjson::SizeType>(s.size()));
  w.EndArray();
}

template <typename Writer>
void write_string(Writer& w, const char* key, const std::string& value) {
  w.Key(key);
  w.String(value.c_str(), static_cast<rapidjson::SizeType>(value.size()));
}

template <typename Writer>
void write_raw_object(Writer& w, const char* key, const std::string& json) {
  w.Key(key);
  w.RawValue(json.c_str(), json.size(), rapidjson::kObjectType);
}

}  // namespace

std::string report_json(const FairnessReport& r) {
  rapidjson::StringBuffer buf;
  rapidjson::Writer<rapidjson::StringBuffer> w(buf);
  w.StartObject();
  write_string(w, "group_a", r.group_a);
  write_string(w, "group_b", r.group_b);
  w.Key("counts");
  w.StartObject();
  w.Key("n1_a"); w.Int64(r.counts.n1_a);
  w.Key("n0_a"); w.Int64(r.counts.n0_a);
  w.Key("n1_b"); w.Int64(r.counts.n1_b);
  w.Key("n0_b"); w.Int64(r.counts.n0_b);
  w.EndObject();
  w.Key("pair_counts");
  w.StartObject();
  w.Key("auc"); w.Int64(r.pairs.auc);
  w.Key("iauc_a"); w.Int64(r.pairs.iauc_a);
  w.Key("iauc_b"); w.Int64(r.pairs.iauc_b);
  w.Key("xauc_ab"); w.Int64(r.pairs.xauc_ab);
  w.Key("xauc_ba"); w.Int64(r.pairs.xauc_ba);
  w.Key("prf_a"); w.Int64(r.pairs.prf_a);
  w.Key("prf_b"); w.Int64(r.pairs.prf_b);
  w.EndObject();
  write_optional(w, "auc", r.auc);
  write_optional(w, "iauc_a", r.iauc_a);
  write_optional(w, "iauc_b", r.iauc_b);
  write_optional(w, "xauc_ab", r.xauc_ab);
  write_optional(w, "xauc_ba", r.xauc_ba);
  write_optional(w, "delta_xauc", r.delta_xauc);
  write_optional(w, "prf_a", r.prf_a);
  write_optional(w, "prf_b", r.prf_b);
  write_optional(w, "delta_prf", r.delta_prf);
  write_strings(w, "absent", r.absent);
  write_strings(w, "warnings", r.warnings);
  w.EndObject();
  return buf.GetString();
}

std::string report_csv(const FairnessReport& r) {
  std::string out = "metric,value\n";
  auto rate = [&](const char* name, const std::optional<double>& v) {
    out += name;
    out += ',';
    if (v) out += format_double(*v);
    out += '\n';
  };
  auto count = [&](const char* name, std::int64_t v) {
    out += name;
    out += ',';
    out += std::to_string(v);
    out += '\n';
  };
  rate("auc", r.auc);
  rate("iauc_a", r.iauc_a);
  rate("iauc_b", r.iauc_b);
  rate("xauc_ab", r.xauc_ab);
  rate("xauc_ba", r.xauc_ba);
  rate("delta_xauc", r.delta_xauc);
  rate("prf_a", r.prf_a);
  rate("prf_b", r.prf_b);
  rate("delta_prf", r.delta_prf);
  count("n1_a", r.counts.n1_a);
  count("n0_a", r.counts.n0_a);
  count("n1_b", r.counts.n1_b);
  count("n0_b", r.counts.n0_b);
  count("pairs_auc", r.pairs.auc);
  count("pairs_iauc_a", r.pairs.iauc_a);
  count("pairs_iauc_b", r.pairs.iauc_b);
  count("pairs_xauc_ab", r.pairs.xauc_ab);
  count("pairs_xauc_ba", r.pairs.xauc_ba);
  count("pairs_prf_a", r.pairs.prf_a);
  count("pairs_prf_b", r.pairs.prf_b);
  return out;
}

std::string adjust_summary_json(const AdjustOutcome& o, const Dataset& train,
                                const RunDescription& run) {
  rapidjson::StringBuffer buf;
  rapidjson::PrettyWriter<rapidjson::StringBuffer> w(buf);
  w.SetIndent(' ', 2);
  w.StartObject();
  write_string(w, "command", run.command);
  w.Key("config");
  w.StartObject();
  write_string(w, "metric", to_string(o.objective.metric));
  w.Key("disparity_only");
  w.Bool(o.objective.disparity_only);
  w.Key("lambda");
  write_double(w, o.objective.lambda);
  write_string(w, "anchor_group", train.group_a);
  write_string(w, "adjusted_group", train.group_b);
  write_string(w, "interpolation", o.mapping.scheme);
  write_string(w, "train", run.train_source);
  if (!run.test_source.empty()) write_string(w, "test", run.test_source);
  w.EndObject();
  write_raw_object(w, "learned_ordering", report_json(o.learned));
  w.Key("train");
  w.StartObject();
  write_raw_object(w, "before", report_json(o.train.before));
  write_raw_object(w, "after", report_json(o.train.after));
  w.EndObject();
  if (o.test) {
    w.Key("test");
    w.StartObject();
    write_raw_object(w, "before", report_json(o.test->before));
    write_raw_object(w, "after", report_json(o.test->after));
    w.EndObject();
  }
  write_strings(w, "warnings", o.warnings);
  w.EndObject();
  return std::string(buf.GetString()) + "\n";
}

void write_curve_csv(std::ostream& out, const SweepOutcome& sweep) {
  out << "lambda,split,auc,delta_xauc,delta_prf\n";
  for (const auto& row : sweep.rows) {
    out << row.lambda << ',' << row.split << ',' << format_double(row.auc) << ',';
    if (row.delta_xauc) out << format_double(*row.delta_xauc);
    out << ',';
    if (row.delta_prf) out << format_double(*row.delta_prf);
    out << '\n';
  }
}

}  // namespace xorder

#include "xorder/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <random>
#include <sstream>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::size_t positives_for(std::size_t n, double rate) {
  auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  if (n >= 2) k = std::clamp<std::size_t>(k, 1, n - 1);
  return std::min(k, n);
}

void append_group(Dataset& data, std::mt19937_64& rng, const std::string& tag,
                  const std::string& id_prefix, std::size_t n, double rate, double mean_pos,
                  double mean_neg, double sd, double warp_exponent) {
  std::vector<int> labels(n, 0);
  std::fill_n(labels.begin(), positives_for(n, rate), 1);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::normal_distribution<double> noise(0.0, sd);
  for (std::size_t i = 0; i < n; ++i) {
    ScoredSample s;
    s.id = fmt::format("{}{}-{}", id_prefix, tag, i);
    s.group = tag;
    s.label = labels[i];
    const double z = (labels[i] == 1 ? mean_pos : mean_neg) + noise(rng);
    s.score = std::pow(logistic(z), warp_exponent);
    data.rows.push_back({s.id, s.group, std::to_string(s.label), format_double(s.score)});
    data.samples.push_back(std::move(s));
  }
}

Dataset empty_dataset(const SynthSpec& spec, const std::string& source) {
  Dataset d;
  d.header = {"id", "group", "label", "score"};
  d.group_a = spec.tag_a;
  d.group_b = spec.tag_b;
  d.source = source;
  return d;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.n_a < 1 || spec.n_b < 1) throw SpecError("group sizes must be at least 1");
  for (double rate : {spec.rate_a, spec.rate_b}) {
    if (!(rate > 0.0 && rate < 1.0)) throw SpecError("positive rates must lie in (0,1)");
  }
  for (double v : {spec.mean_pos_a, spec.mean_neg_a, spec.mean_pos_b, spec.mean_neg_b, spec.shift}) {
    if (!std::isfinite(v)) throw SpecError("means and shift must be finite");
  }
  if (!(spec.sd > 0.0) || !std::isfinite(spec.sd)) throw SpecError("sd must be positive");
  if (spec.tag_a.empty() || spec.tag_a == spec.tag_b) {
    throw SpecError("group tags must be distinct and nonempty");
  }
}

SynthSpec parse_synth_spec(const std::string& text) {
  SynthSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n_a") spec.n_a = std::stoull(value);
      else if (key == "n_b") spec.n_b = std::stoull(value);
      else if (key == "n_test_a") spec.n_test_a = std::stoull(value);
      else if (key == "n_test_b") spec.n_test_b = std::stoull(value);
      else if (key == "rate_a") spec.rate_a = std::stod(value);
      else if (key == "rate_b") spec.rate_b = std::stod(value);
      else if (key == "mean_pos_a") spec.mean_pos_a = std::stod(value);
      else if (key == "mean_neg_a") spec.mean_neg_a = std::stod(value);
      else if (key == "mean_pos_b") spec.mean_pos_b = std::stod(value);
      else if (key == "mean_neg_b") spec.mean_neg_b = std::stod(value);
      else if (key == "sd") spec.sd = std::stod(value);
      else if (key == "shift") spec.shift = std::stod(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "tag_a") spec.tag_a = value;
      else if (key == "tag_b") spec.tag_b = value;
      else throw SpecError("unknown synth key '" + key + "'");
    } catch (const std::logic_error&) {
      throw SpecError("bad value for synth key '" + key + "': '" + value + "'");
    }
  }
  return spec;
}

SyntheticSplit generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  SyntheticSplit out{empty_dataset(spec, "synthetic:train"), empty_dataset(spec, "synthetic:test")};
  append_group(out.train, rng, spec.tag_a, "tr-", spec.n_a, spec.rate_a, spec.mean_pos_a,
               spec.mean_neg_a, spec.sd, 1.0);
  append_group(out.train, rng, spec.tag_b, "tr-", spec.n_b, spec.rate_b, spec.mean_pos_b,
               spec.mean_neg_b, spec.sd, 1.0);
  append_group(out.test, rng, spec.tag_a, "te-", spec.n_test_a, spec.rate_a, spec.mean_pos_a,
               spec.mean_neg_a, spec.sd, 1.0);
  append_group(out.test, rng, spec.tag_b, "te-", spec.n_test_b, spec.rate_b, spec.mean_pos_b,
               spec.mean_neg_b, spec.sd, std::exp(spec.shift));
  return out;
}

}  // namespace xorder

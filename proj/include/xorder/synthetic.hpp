#pragma once

#include <cstdint>
#include <string>

#include "xorder/dataset.hpp"

namespace xorder {

/// Parameters of the synthetic two-group generator. Scores are
/// logistic(z) with z ~ Normal(mean for group and label, sd).
struct SynthSpec {
  std::size_t n_a = 1000;
  std::size_t n_b = 1000;
  std::size_t n_test_a = 0;
  std::size_t n_test_b = 0;
  double rate_a = 0.5;  // fraction of positives, in (0,1)
  double rate_b = 0.5;
  double mean_pos_a = 1.0;
  double mean_neg_a = -1.0;
  double mean_pos_b = 1.0;
  double mean_neg_b = -1.0;
  double sd = 1.0;
  // Monotone warp s -> s^exp(shift) applied to group-b test scores only.
  double shift = 0.0;
  std::uint64_t seed = 0;
  std::string tag_a = "a";
  std::string tag_b = "b";
};

struct SyntheticSplit {
  Dataset train;
  Dataset test;  // no rows when n_test_a + n_test_b == 0
};

/// Throws SpecError on invalid parameters.
void validate(const SynthSpec& spec);

/// Parses "key=value,key=value" using the SynthSpec field names.
SynthSpec parse_synth_spec(const std::string& text);

/// Deterministic for a fixed spec. Each group gets round(rate * n) positives
/// (at least one of each class when n >= 2) at shuffled positions.
SyntheticSplit generate_synthetic(const SynthSpec& spec);

}  // namespace xorder

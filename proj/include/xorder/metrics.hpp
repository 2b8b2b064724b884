#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xorder {

struct ScoredSample {
  std::string id;
  std::string group;
  int label = 0;  // 0 or 1
  double score = 0.0;
};

/// Throws Error if a score is not finite or a label is outside {0,1}.
void validate_samples(std::span<const ScoredSample> samples);

/// An exact rate num/den. Comparisons are exact (no floating point).
struct Rate {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

bool operator<(const Rate& lhs, const Rate& rhs);
bool operator<=(const Rate& lhs, const Rate& rhs);
bool operator==(const Rate& lhs, const Rate& rhs);

/// max(lhs, rhs) under exact comparison.
Rate max_rate(const Rate& lhs, const Rate& rhs);
Rate min_rate(const Rate& lhs, const Rate& rhs);

/// Positive/negative counts of the two groups and the pair totals they imply.
struct GroupCounts {
  std::int64_t n1_a = 0;
  std::int64_t n0_a = 0;
  std::int64_t n1_b = 0;
  std::int64_t n0_b = 0;

  std::int64_t n1() const { return n1_a + n1_b; }
  std::int64_t n0() const { return n0_a + n0_b; }
  std::int64_t k() const { return n1() * n0(); }
  std::int64_t k_a() const { return n1_a * n0_a; }
  std::int64_t k_b() const { return n1_b * n0_b; }
  std::int64_t k_ab() const { return n1_a * n0_b; }
  std::int64_t k_ba() const { return n1_b * n0_a; }
};

/// Integer numerators: number of (positive, negative) pairs won strictly by
/// the positive.
struct PairCounts {
  std::int64_t auc = 0;
  std::int64_t iauc_a = 0;
  std::int64_t iauc_b = 0;
  std::int64_t xauc_ab = 0;
  std::int64_t xauc_ba = 0;
  std::int64_t prf_a = 0;
  std::int64_t prf_b = 0;
};

/// Utility and fairness of one scoring of a two-group dataset. A rate is
/// absent (nullopt) when the data lack the class its denominator needs; its
/// name is then listed in `absent`.
struct FairnessReport {
  std::string group_a;
  std::string group_b;
  GroupCounts counts;
  PairCounts pairs;

  std::optional<double> auc;
  std::optional<double> iauc_a;
  std::optional<double> iauc_b;
  std::optional<double> xauc_ab;
  std::optional<double> xauc_ba;
  std::optional<double> delta_xauc;
  std::optional<double> prf_a;
  std::optional<double> prf_b;
  std::optional<double> delta_prf;

  std::vector<std::string> absent;
  std::vector<std::string> warnings;
};

/// Fills every rate of `report` from its counts and pair numerators.
void finalize_rates(FairnessReport& report);

/// |xAUC(a,b) - xAUC(b,a)| as an exact fraction. Throws EmptyClass when either
/// cross-group denominator is zero.
Rate delta_xauc_exact(const GroupCounts& counts, std::int64_t xauc_ab_num,
                      std::int64_t xauc_ba_num);

/// |PRF(a) - PRF(b)| as an exact fraction. Throws EmptyClass when n1_a, n1_b
/// or n0 is zero.
Rate delta_prf_exact(const GroupCounts& counts, std::int64_t prf_a_num,
                     std::int64_t prf_b_num);

// Tied scores never count as a win: every metric uses the strict indicator
// score(positive) > score(negative).

Rate compute_auc(std::span<const ScoredSample> samples);
Rate compute_xauc(std::span<const ScoredSample> samples, const std::string& from_group,
                  const std::string& to_group);
Rate compute_iauc(std::span<const ScoredSample> samples, const std::string& group);
Rate compute_prf(std::span<const ScoredSample> samples, const std::string& group);

/// All metrics from one sort of the scores, O(n log n). Samples whose group is
/// neither `group_a` nor `group_b` raise GroupCountError.
FairnessReport fairness_report(std::span<const ScoredSample> samples,
                               const std::string& group_a, const std::string& group_b);

/// Counts positives and negatives per group.
GroupCounts count_groups(std::span<const ScoredSample> samples, const std::string& group_a,
                         const std::string& group_b);

}  // namespace xorder

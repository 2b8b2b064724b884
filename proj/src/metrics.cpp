#include "xorder/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

using Wide = __int128;

Wide cross(const Rate& lhs, const Rate& rhs) {
  return static_cast<Wide>(lhs.num) * rhs.den - static_cast<Wide>(rhs.num) * lhs.den;
}

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Rate narrow(Wide num, Wide den) {
  constexpr Wide kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || den > kMax) {
    throw CapacityExceeded("exact fraction does not fit in 64 bits");
  }
  return Rate{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Number of (p, n) pairs with score(p) > score(n), p drawn from `pos`, n from `neg`.
std::int64_t strict_wins(std::vector<double> pos, std::vector<double> neg) {
  std::sort(neg.begin(), neg.end());
  std::int64_t wins = 0;
  for (double s : pos) {
    wins += std::lower_bound(neg.begin(), neg.end(), s) - neg.begin();
  }
  return wins;
}

}  // namespace

bool operator<(const Rate& lhs, const Rate& rhs) { return cross(lhs, rhs) < 0; }
bool operator<=(const Rate& lhs, const Rate& rhs) { return cross(lhs, rhs) <= 0; }
bool operator==(const Rate& lhs, const Rate& rhs) { return cross(lhs, rhs) == 0; }
Rate max_rate(const Rate& lhs, const Rate& rhs) { return lhs < rhs ? rhs : lhs; }
Rate min_rate(const Rate& lhs, const Rate& rhs) { return rhs < lhs ? rhs : lhs; }

void validate_samples(std::span<const ScoredSample> samples) {
  for (const auto& s : samples) {
    if (!std::isfinite(s.score)) {
      throw Error("sample '" + s.id + "' has a non-finite score");
    }
    if (s.label != 0 && s.label != 1) {
      throw Error("sample '" + s.id + "' has a label outside {0,1}");
    }
  }
}

Rate delta_xauc_exact(const GroupCounts& c, std::int64_t xauc_ab_num,
                      std::int64_t xauc_ba_num) {
  if (c.k_ab() == 0 || c.k_ba() == 0) {
    throw EmptyClass("xAUC needs a positive and a negative in each group");
  }
  const Wide num = wide_abs(static_cast<Wide>(xauc_ab_num) * c.k_ba() -
                            static_cast<Wide>(xauc_ba_num) * c.k_ab());
  return narrow(num, static_cast<Wide>(c.k_ab()) * c.k_ba());
}

Rate delta_prf_exact(const GroupCounts& c, std::int64_t prf_a_num, std::int64_t prf_b_num) {
  if (c.n1_a == 0 || c.n1_b == 0 || c.n0() == 0) {
    throw EmptyClass("PRF needs a positive in each group and at least one negative");
  }
  const Wide num = wide_abs(static_cast<Wide>(prf_a_num) * c.n1_b -
                            static_cast<Wide>(prf_b_num) * c.n1_a);
  return narrow(num, static_cast<Wide>(c.n1_a) * c.n1_b * c.n0());
}

Rate compute_auc(std::span<const ScoredSample> samples) {
  std::vector<double> pos, neg;
  for (const auto& s : samples) (s.label == 1 ? pos : neg).push_back(s.score);
  if (pos.empty() || neg.empty()) throw EmptyClass("AUC needs positives and negatives");
  const auto den = static_cast<std::int64_t>(pos.size()) * static_cast<std::int64_t>(neg.size());
  return Rate{strict_wins(std::move(pos), std::move(neg)), den};
}

Rate compute_xauc(std::span<const ScoredSample> samples, const std::string& from_group,
                  const std::string& to_group) {
  std::vector<double> pos, neg;
  for (const auto& s : samples) {
    if (s.label == 1 && s.group == from_group) pos.push_back(s.score);
    if (s.label == 0 && s.group == to_group) neg.push_back(s.score);
  }
  if (pos.empty()) throw EmptyClass("group '" + from_group + "' has no positives");
  if (neg.empty()) throw EmptyClass("group '" + to_group + "' has no negatives");
  const auto den = static_cast<std::int64_t>(pos.size()) * static_cast<std::int64_t>(neg.size());
  return Rate{strict_wins(std::move(pos), std::move(neg)), den};
}

Rate compute_iauc(std::span<const ScoredSample> samples, const std::string& group) {
  return compute_xauc(samples, group, group);
}

Rate compute_prf(std::span<const ScoredSample> samples, const std::string& group) {
  std::vector<double> pos, neg;
  for (const auto& s : samples) {
    if (s.label == 1 && s.group == group) pos.push_back(s.score);
    if (s.label == 0) neg.push_back(s.score);
  }
  if (pos.empty()) throw EmptyClass("group '" + group + "' has no positives");
  if (neg.empty()) throw EmptyClass("PRF needs at least one negative");
  const auto den = static_cast<std::int64_t>(pos.size()) * static_cast<std::int64_t>(neg.size());
  return Rate{strict_wins(std::move(pos), std::move(neg)), den};
}

GroupCounts count_groups(std::span<const ScoredSample> samples, const std::string& group_a,
                         const std::string& group_b) {
  GroupCounts c;
  for (const auto& s : samples) {
    if (s.group == group_a) {
      (s.label == 1 ? c.n1_a : c.n0_a) += 1;
    } else if (s.group == group_b) {
      (s.label == 1 ? c.n1_b : c.n0_b) += 1;
    } else {
      throw GroupCountError("sample '" + s.id + "' belongs to unexpected group '" + s.group +
                            "'");
    }
  }
  return c;
}

void finalize_rates(FairnessReport& r) {
  const GroupCounts& c = r.counts;
  const PairCounts& p = r.pairs;
  r.absent.clear();
  auto rate = [&r](const char* name, std::int64_t num, std::int64_t den) -> std::optional<double> {
    if (den == 0) {
      r.absent.emplace_back(name);
      return std::nullopt;
    }
    return Rate{num, den}.value();
  };
  r.auc = rate("auc", p.auc, c.k());
  r.iauc_a = rate("iauc_a", p.iauc_a, c.k_a());
  r.iauc_b = rate("iauc_b", p.iauc_b, c.k_b());
  r.xauc_ab = rate("xauc_ab", p.xauc_ab, c.k_ab());
  r.xauc_ba = rate("xauc_ba", p.xauc_ba, c.k_ba());
  r.prf_a = rate("prf_a", p.prf_a, c.n1_a * c.n0());
  r.prf_b = rate("prf_b", p.prf_b, c.n1_b * c.n0());
  if (r.xauc_ab && r.xauc_ba) {
    r.delta_xauc = delta_xauc_exact(c, p.xauc_ab, p.xauc_ba).value();
  } else {
    r.delta_xauc.reset();
    r.absent.emplace_back("delta_xauc");
  }
  if (r.prf_a && r.prf_b) {
    r.delta_prf = delta_prf_exact(c, p.prf_a, p.prf_b).value();
  } else {
    r.delta_prf.reset();
    r.absent.emplace_back("delta_prf");
  }
}

FairnessReport fairness_report(std::span<const ScoredSample> samples,
                               const std::string& group_a, const std::string& group_b) {
  validate_samples(samples);
  FairnessReport report;
  report.group_a = group_a;
  report.group_b = group_b;
  report.counts = count_groups(samples, group_a, group_b);

  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t l, std::size_t r) { return samples[l].score < samples[r].score; });

  // Ascending sweep over blocks of equal score. Negatives strictly below the
  // current block are the ones its positives beat.
  std::int64_t neg_below_a = 0;
  std::int64_t neg_below_b = 0;
  bool out_of_unit = false;
  PairCounts& p = report.pairs;
  for (std::size_t lo = 0; lo < idx.size();) {
    std::size_t hi = lo;
    while (hi < idx.size() && samples[idx[hi]].score == samples[idx[lo]].score) ++hi;
    std::int64_t block_neg_a = 0;
    std::int64_t block_neg_b = 0;
    for (std::size_t t = lo; t < hi; ++t) {
      const ScoredSample& s = samples[idx[t]];
      if (s.score < 0.0 || s.score > 1.0) out_of_unit = true;
      const bool in_a = s.group == group_a;
      if (s.label == 1) {
        if (in_a) {
          p.iauc_a += neg_below_a;
          p.xauc_ab += neg_below_b;
        } else {
          p.iauc_b += neg_below_b;
          p.xauc_ba += neg_below_a;
        }
      } else {
        (in_a ? block_neg_a : block_neg_b) += 1;
      }
    }
    neg_below_a += block_neg_a;
    neg_below_b += block_neg_b;
    lo = hi;
  }
  p.auc = p.iauc_a + p.iauc_b + p.xauc_ab + p.xauc_ba;
  p.prf_a = p.iauc_a + p.xauc_ab;
  p.prf_b = p.iauc_b + p.xauc_ba;
  if (out_of_unit) {
    report.warnings.emplace_back(
        "scores outside [0,1]; metrics depend only on their ordering");
  }
  finalize_rates(report);
  return report;
}

}  // namespace xorder

#include "xorder/ordering.hpp"

#include <algorithm>
#include <numeric>

#include "xorder/errors.hpp"

namespace xorder {

RankedGroup rank_within_group(std::span<const ScoredSample> samples, const std::string& group) {
  RankedGroup g;
  g.group = group;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].group == group) g.order.push_back(i);
  }
  if (g.order.empty()) throw EmptyGroup("group '" + group + "' has no samples");
  std::stable_sort(g.order.begin(), g.order.end(), [&](std::size_t l, std::size_t r) {
    return samples[l].score > samples[r].score;
  });

  const std::size_t n = g.order.size();
  g.labels.reserve(n);
  g.scores.reserve(n);
  for (std::size_t i : g.order) {
    g.labels.push_back(samples[i].label);
    g.scores.push_back(samples[i].score);
  }
  g.prefix_pos.assign(n + 1, 0);
  g.suffix_neg.assign(n + 1, 0);
  g.suffix_pos.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.prefix_pos[i + 1] = g.prefix_pos[i] + g.labels[i];
  for (std::size_t i = n; i-- > 0;) {
    g.suffix_neg[i] = g.suffix_neg[i + 1] + (g.labels[i] == 0 ? 1 : 0);
    g.suffix_pos[i] = g.suffix_pos[i + 1] + g.labels[i];
  }

  // Positives beat the negatives after them, except those tied on score.
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && g.scores[hi] == g.scores[lo]) ++hi;
    const std::int64_t pos_in_block = g.prefix_pos[hi] - g.prefix_pos[lo];
    g.within_wins += pos_in_block * g.suffix_neg[hi];
    lo = hi;
  }
  return g;
}

std::size_t CrossGroupOrdering::count(Step s) const {
  return static_cast<std::size_t>(std::count(steps.begin(), steps.end(), s));
}

void CrossGroupOrdering::validate(const RankedGroup& a, const RankedGroup& b) const {
  if (count(Step::TakeA) != a.size() || count(Step::TakeB) != b.size()) {
    throw Error("ordering does not match the group sizes");
  }
}

std::vector<std::size_t> CrossGroupOrdering::merged(const RankedGroup& a,
                                                    const RankedGroup& b) const {
  validate(a, b);
  std::vector<std::size_t> out;
  out.reserve(steps.size());
  std::size_t i = 0;
  std::size_t j = 0;
  for (Step s : steps) out.push_back(s == Step::TakeA ? a.order[i++] : b.order[j++]);
  return out;
}

CrossGroupOrdering ordering_from_scores(const RankedGroup& a, const RankedGroup& b) {
  CrossGroupOrdering o;
  o.steps.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    const bool take_a = j == b.size() || (i < a.size() && a.scores[i] >= b.scores[j]);
    o.steps.push_back(take_a ? Step::TakeA : Step::TakeB);
    (take_a ? i : j) += 1;
  }
  return o;
}

CrossCounts cross_counts(const CrossGroupOrdering& ordering, const RankedGroup& a,
                         const RankedGroup& b) {
  ordering.validate(a, b);
  CrossCounts c;
  std::size_t i = 0;
  std::size_t j = 0;
  for (Step s : ordering.steps) {
    if (s == Step::TakeA) {
      if (a.labels[i] == 1) c.ab += b.suffix_neg[j];
      ++i;
    } else {
      if (b.labels[j] == 1) c.ba += a.suffix_neg[i];
      ++j;
    }
  }
  return c;
}

GroupCounts group_counts(const RankedGroup& a, const RankedGroup& b) {
  GroupCounts c;
  c.n1_a = a.n1();
  c.n0_a = a.n0();
  c.n1_b = b.n1();
  c.n0_b = b.n0();
  return c;
}

FairnessReport metrics_from_ordering(const CrossGroupOrdering& ordering, const RankedGroup& a,
                                     const RankedGroup& b) {
  const CrossCounts cross = cross_counts(ordering, a, b);
  FairnessReport r;
  r.group_a = a.group;
  r.group_b = b.group;
  r.counts = group_counts(a, b);
  r.pairs.iauc_a = a.within_wins;
  r.pairs.iauc_b = b.within_wins;
  r.pairs.xauc_ab = cross.ab;
  r.pairs.xauc_ba = cross.ba;
  r.pairs.auc = a.within_wins + b.within_wins + cross.ab + cross.ba;
  r.pairs.prf_a = a.within_wins + cross.ab;
  r.pairs.prf_b = b.within_wins + cross.ba;
  finalize_rates(r);
  return r;
}

}  // namespace xorder

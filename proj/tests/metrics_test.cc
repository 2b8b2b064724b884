#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xorder/errors.hpp"
#include "xorder/metrics.hpp"

namespace xorder {
namespace {

std::vector<ScoredSample> make(std::initializer_list<std::tuple<const char*, int, double>> rows) {
  std::vector<ScoredSample> out;
  int id = 0;
  for (const auto& [g, label, score] : rows) {
    out.push_back({std::to_string(id++), g, label, score});
  }
  return out;
}

TEST(ComputeAuc, PerfectlySeparated) {
  const auto s = make({{"a", 1, 0.9}, {"a", 1, 0.8}, {"b", 1, 0.7},
                       {"a", 0, 0.3}, {"b", 0, 0.2}, {"b", 0, 0.1}});
  const Rate auc = compute_auc(s);
  EXPECT_EQ(auc.num, 9);
  EXPECT_EQ(auc.den, 9);
  EXPECT_EQ(auc.value(), 1.0);
}

TEST(ComputeAuc, TieCountsAsLoss) {
  const auto s = make({{"a", 1, 0.5}, {"b", 0, 0.5}});
  EXPECT_EQ(compute_auc(s).value(), 0.0);
}

TEST(ComputeAuc, EmptyClassThrows) {
  const auto s = make({{"a", 1, 0.5}, {"b", 1, 0.2}});
  EXPECT_THROW(compute_auc(s), EmptyClass);
}

TEST(ComputeAuc, SeededMatchesDoubleLoop) {
  std::mt19937_64 rng(8);
  auto s = oracle::random_samples(rng, 4, 4);
  s[0].label = 1;
  s[1].label = 0;
  const auto ref = oracle::double_loop(s, "a");
  const Rate auc = compute_auc(s);
  EXPECT_EQ(auc.num, ref.auc);
  EXPECT_EQ(auc.den, (ref.n1_a + ref.n1_b) * (ref.n0_a + ref.n0_b));
}

TEST(ComputeXauc, Extremes) {
  const auto high = make({{"a", 1, 1.0}, {"a", 1, 1.0}, {"b", 0, 0.0}, {"b", 1, 0.5}});
  EXPECT_EQ(compute_xauc(high, "a", "b").value(), 1.0);
  const auto low = make({{"a", 1, 0.0}, {"b", 0, 1.0}, {"b", 0, 1.0}});
  EXPECT_EQ(compute_xauc(low, "a", "b").value(), 0.0);
}

TEST(ComputeXauc, MissingClassThrows) {
  const auto s = make({{"a", 0, 0.4}, {"b", 0, 0.1}});
  EXPECT_THROW(compute_xauc(s, "a", "b"), EmptyClass);
  EXPECT_THROW(compute_xauc(make({{"a", 1, 0.4}, {"b", 1, 0.1}}), "a", "b"), EmptyClass);
}

TEST(ComputeXauc, SeededMatchesDoubleLoop) {
  std::mt19937_64 rng(10);
  auto s = oracle::random_samples(rng, 5, 5);
  s[0].label = 1;
  s[5].label = 0;
  s[6].label = 1;
  s[1].label = 0;
  const auto ref = oracle::double_loop(s, "a");
  const Rate ab = compute_xauc(s, "a", "b");
  const Rate ba = compute_xauc(s, "b", "a");
  EXPECT_EQ(ab.num, ref.xauc_ab);
  EXPECT_EQ(ab.den, ref.n1_a * ref.n0_b);
  EXPECT_EQ(ba.num, ref.xauc_ba);
  EXPECT_EQ(ba.den, ref.n1_b * ref.n0_a);
}

TEST(ComputeIauc, Cases) {
  EXPECT_EQ(compute_iauc(make({{"a", 1, 0.9}, {"a", 0, 0.1}, {"b", 0, 0.95}}), "a").value(), 1.0);
  EXPECT_EQ(compute_iauc(make({{"a", 1, 0.4}, {"a", 0, 0.4}}), "a").value(), 0.0);
  EXPECT_THROW(compute_iauc(make({{"a", 1, 0.4}, {"b", 0, 0.4}}), "a"), EmptyClass);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    auto s = oracle::random_samples(rng, 8, 7, 4);
    s[0].label = 1;
    s[1].label = 0;
    const auto ref = oracle::double_loop(s, "a");
    EXPECT_EQ(compute_iauc(s, "a").num, ref.iauc_a);
  }
}

TEST(ComputePrf, ExtremesAndIdentity) {
  EXPECT_EQ(compute_prf(make({{"a", 1, 0.9}, {"a", 0, 0.1}, {"b", 0, 0.2}}), "a").value(), 1.0);
  EXPECT_EQ(compute_prf(make({{"a", 1, 0.0}, {"a", 0, 0.1}, {"b", 0, 0.2}}), "a").value(), 0.0);
  EXPECT_THROW(compute_prf(make({{"a", 0, 0.0}, {"b", 0, 0.2}}), "a"), EmptyClass);

  // PRF(a) = (n0_b/n0) xAUC(a,b) + (n0_a/n0) iAUC(a), checked on numerators.
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    auto s = oracle::random_samples(rng, 6, 6, rep % 2 ? 5 : 0);
    s[0].label = 1;
    s[1].label = 0;
    s[6].label = 1;
    s[7].label = 0;
    const Rate prf = compute_prf(s, "a");
    const Rate x = compute_xauc(s, "a", "b");
    const Rate i = compute_iauc(s, "a");
    const auto ref = oracle::double_loop(s, "a");
    const std::int64_t n0 = ref.n0_a + ref.n0_b;
    // x.den = n1_a n0_b and i.den = n1_a n0_a, so the identity reads
    // prf.num / (n1_a n0) == (x.num + i.num) / (n1_a n0).
    EXPECT_EQ(prf.num * (ref.n1_a * n0), (x.num + i.num) * prf.den);
    EXPECT_EQ(prf.den, ref.n1_a * n0);
  }
}

TEST(FairnessReport, SymmetricGroupsHaveNoDisparity) {
  const auto s = make({{"a", 1, 0.9}, {"a", 0, 0.3}, {"a", 1, 0.5},
                       {"b", 1, 0.9}, {"b", 0, 0.3}, {"b", 1, 0.5}});
  const FairnessReport r = fairness_report(s, "a", "b");
  EXPECT_EQ(*r.delta_xauc, 0.0);
  EXPECT_EQ(*r.delta_prf, 0.0);
  EXPECT_TRUE(r.absent.empty());
}

TEST(FairnessReport, SeededMatchesBruteForceFieldByField) {
  std::mt19937_64 rng(12);
  auto s = oracle::random_samples(rng, 6, 6);
  s[0].label = 1;
  s[1].label = 0;
  s[6].label = 1;
  s[7].label = 0;
  const auto ref = oracle::double_loop(s, "a");
  const FairnessReport r = fairness_report(s, "a", "b");
  EXPECT_EQ(r.pairs.auc, ref.auc);
  EXPECT_EQ(r.pairs.iauc_a, ref.iauc_a);
  EXPECT_EQ(r.pairs.iauc_b, ref.iauc_b);
  EXPECT_EQ(r.pairs.xauc_ab, ref.xauc_ab);
  EXPECT_EQ(r.pairs.xauc_ba, ref.xauc_ba);
  EXPECT_EQ(r.pairs.prf_a, ref.prf_a);
  EXPECT_EQ(r.pairs.prf_b, ref.prf_b);
  const double k = static_cast<double>((ref.n1_a + ref.n1_b) * (ref.n0_a + ref.n0_b));
  EXPECT_DOUBLE_EQ(*r.auc, ref.auc / k);
  EXPECT_DOUBLE_EQ(*r.delta_xauc,
                   std::abs(static_cast<double>(ref.xauc_ab) / (ref.n1_a * ref.n0_b) -
                            static_cast<double>(ref.xauc_ba) / (ref.n1_b * ref.n0_a)));
}

// Invariant sweeps over random instances, including heavy ties.
TEST(FairnessReport, PropertiesOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t na = 1 + rng() % 25;
    const std::size_t nb = 1 + rng() % 25;
    auto s = oracle::random_samples(rng, na, nb, rep % 3 == 0 ? 4 : 0, 0.1 + 0.8 * (rng() % 9) / 8.0);
    const auto ref = oracle::double_loop(s, "a");
    const FairnessReport r = fairness_report(s, "a", "b");
    ASSERT_EQ(r.pairs.auc, ref.auc);
    ASSERT_EQ(r.pairs.iauc_a, ref.iauc_a);
    ASSERT_EQ(r.pairs.iauc_b, ref.iauc_b);
    ASSERT_EQ(r.pairs.xauc_ab, ref.xauc_ab);
    ASSERT_EQ(r.pairs.xauc_ba, ref.xauc_ba);
    ASSERT_EQ(r.pairs.prf_a, ref.prf_a);
    ASSERT_EQ(r.pairs.prf_b, ref.prf_b);
    for (const auto& v : {r.auc, r.iauc_a, r.iauc_b, r.xauc_ab, r.xauc_ba, r.delta_xauc, r.prf_a,
                          r.prf_b, r.delta_prf}) {
      if (v) {
        EXPECT_GE(*v, 0.0);
        EXPECT_LE(*v, 1.0);
      }
    }

    // Any strictly increasing transform leaves every numerator unchanged.
    auto warped = s;
    for (auto& x : warped) x.score = std::exp(3.0 * x.score) - 7.0;
    const FairnessReport w = fairness_report(warped, "a", "b");
    EXPECT_EQ(w.pairs.auc, r.pairs.auc);
    EXPECT_EQ(w.pairs.xauc_ab, r.pairs.xauc_ab);
    EXPECT_EQ(w.pairs.xauc_ba, r.pairs.xauc_ba);
    EXPECT_EQ(w.pairs.prf_a, r.pairs.prf_a);
    EXPECT_EQ(w.pairs.prf_b, r.pairs.prf_b);
    EXPECT_FALSE(w.warnings.empty());
  }
}

TEST(FairnessReport, PartialReportMarksAbsentMetrics) {
  const auto s = make({{"a", 1, 0.9}, {"a", 1, 0.2}, {"b", 0, 0.3}, {"b", 1, 0.5}});
  const FairnessReport r = fairness_report(s, "a", "b");
  EXPECT_TRUE(r.auc.has_value());
  EXPECT_FALSE(r.iauc_a.has_value());
  EXPECT_FALSE(r.xauc_ba.has_value());
  EXPECT_FALSE(r.delta_xauc.has_value());
  EXPECT_TRUE(r.delta_prf.has_value());
  EXPECT_NE(std::find(r.absent.begin(), r.absent.end(), "delta_xauc"), r.absent.end());
}

TEST(FairnessReport, RejectsThirdGroupAndBadScores) {
  EXPECT_THROW(fairness_report(make({{"a", 1, 0.9}, {"c", 0, 0.1}}), "a", "b"), GroupCountError);
  EXPECT_THROW(fairness_report(make({{"a", 1, NAN}, {"b", 0, 0.1}}), "a", "b"), Error);
}

TEST(Rate, ExactComparison) {
  EXPECT_TRUE((Rate{1, 3} < Rate{1, 2}));
  EXPECT_TRUE((Rate{2, 6} == Rate{1, 3}));
  EXPECT_TRUE((Rate{2, 6} <= Rate{1, 3}));
  EXPECT_EQ(max_rate(Rate{1, 5}, Rate{1, 7}).den, 5);
  EXPECT_EQ(min_rate(Rate{1, 5}, Rate{1, 7}).den, 7);
}

}  // namespace
}  // namespace xorder

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "xorder/dataset.hpp"
#include "xorder/errors.hpp"
#include "xorder/pipeline.hpp"
#include "xorder/synthetic.hpp"

namespace xorder {
namespace {

Dataset parse(const std::string& text, const std::string& anchor = "auto") {
  std::istringstream in(text);
  return parse_csv(in, ColumnMap{}, anchor);
}

TEST(ParseCsv, FourRows) {
  const Dataset d = parse(
      "id,group,label,score\n"
      "1,x,1,0.9\n"
      "2,x,0,0.4\n"
      "3,y,1,0.3\n"
      "4,y,0,0.6\n");
  ASSERT_EQ(d.samples.size(), 4u);
  EXPECT_EQ(d.samples[2].id, "3");
  EXPECT_EQ(d.samples[3].score, 0.6);
  // y ranks its positive below its negative: lower PRF, so it is group b.
  EXPECT_EQ(d.group_a, "x");
  EXPECT_EQ(d.group_b, "y");
}

TEST(ParseCsv, ThreeGroupsRejected) {
  EXPECT_THROW(parse("id,group,label,score\n1,x,1,0.9\n2,y,0,0.4\n3,z,1,0.3\n"), GroupCountError);
}

TEST(ParseCsv, LabelOutOfDomainNamesLineAndColumn) {
  const std::string text =
      "id,group,label,score\n"
      "1,x,1,0.9\n"
      "2,x,0,0.4\n"
      "3,y,1,0.3\n"
      "4,y,0,0.6\n"
      "5,y,0,0.2\n"
      "6,x,2,0.5\n";
  try {
    parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_EQ(e.column(), "label");
    EXPECT_NE(e.reason().find("out-of-domain"), std::string::npos);
  }
}

TEST(ParseCsv, MissingAndMalformedFields) {
  EXPECT_THROW(parse("id,group,label,score\n1,x,1,\n2,y,0,0.1\n"), ParseError);
  EXPECT_THROW(parse("id,group,label,score\n1,x,1,abc\n2,y,0,0.1\n"), ParseError);
  EXPECT_THROW(parse("id,group,label,score\n1,x,1\n"), ParseError);
  EXPECT_THROW(parse("id,grp,label,score\n1,x,1,0.5\n"), ParseError);
  EXPECT_THROW(parse("id,group,label,score\n1,x,1,nan\n2,y,0,0.1\n"), ParseError);
}

TEST(ParseCsv, ExplicitAnchorAndCustomColumns) {
  std::istringstream in("s,g,y,key\n0.9,x,1,a\n0.1,y,0,b\n");
  ColumnMap cols{"key", "g", "y", "s"};
  const Dataset d = parse_csv(in, cols, "y");
  EXPECT_EQ(d.group_a, "y");
  EXPECT_EQ(d.group_b, "x");
  EXPECT_EQ(d.samples[0].id, "a");
  std::istringstream again("s,g,y,key\n0.9,x,1,a\n0.1,y,0,b\n");
  EXPECT_THROW(parse_csv(again, cols, "q"), SpecError);
}

TEST(ParseCsv, QuotedFields) {
  const auto f = split_csv_record(R"("a,b",x,"say ""hi""")");
  EXPECT_EQ(f, (std::vector<std::string>{"a,b", "x", R"(say "hi")"}));
  EXPECT_EQ(split_csv_record(join_csv_record(f)), f);
}

TEST(WriteCsv, RoundTripsFieldForField) {
  SynthSpec spec;
  spec.n_a = 30;
  spec.n_b = 20;
  spec.seed = 3;
  const Dataset d = generate_synthetic(spec).train;
  std::ostringstream out;
  write_csv(out, d);
  std::istringstream in(out.str());
  Dataset back = parse_csv(in, ColumnMap{}, d.group_a, d.source);
  EXPECT_TRUE(back == d);
  for (std::size_t r = 0; r < d.samples.size(); ++r) {
    EXPECT_EQ(back.samples[r].score, d.samples[r].score);
  }
}

TEST(WriteCsv, AppendsAdjustedColumn) {
  const Dataset d = parse("id,group,label,score\n1,x,1,0.9\n2,y,0,0.4\n");
  const std::vector<double> adj{0.9, 0.1};
  std::ostringstream out;
  write_csv(out, d, std::span<const double>(adj));
  EXPECT_EQ(out.str(),
            "id,group,label,score,adjusted_score\n"
            "1,x,1,0.9,0.90000000000000002\n"
            "2,y,0,0.4,0.10000000000000001\n");
}

TEST(Synthetic, DeterministicForSeed) {
  SynthSpec spec;
  spec.n_a = 10;
  spec.n_b = 10;
  spec.seed = 7;
  const SyntheticSplit one = generate_synthetic(spec);
  const SyntheticSplit two = generate_synthetic(spec);
  EXPECT_TRUE(one.train == two.train);
  std::ostringstream a, b;
  write_csv(a, one.train);
  write_csv(b, two.train);
  EXPECT_EQ(a.str(), b.str());
  spec.seed = 8;
  std::ostringstream c;
  write_csv(c, generate_synthetic(spec).train);
  EXPECT_NE(a.str(), c.str());
}

TEST(Synthetic, ZeroShiftMatchesTrainDistribution) {
  SynthSpec spec;
  spec.n_a = 10;
  spec.n_b = 10000;
  spec.n_test_a = 10;
  spec.n_test_b = 10000;
  spec.seed = 21;
  const SyntheticSplit s = generate_synthetic(spec);
  auto b_scores = [&](const Dataset& d) {
    std::vector<double> v;
    for (const auto& x : d.samples) {
      if (x.group == "b") v.push_back(x.score);
    }
    return v;
  };
  // Critical value of the two-sample KS test at alpha = 0.001, n = m = 1e4.
  const double critical = 1.95 * std::sqrt(2.0 / 10000.0);
  EXPECT_LT(oracle::ks_statistic(b_scores(s.train), b_scores(s.test)), critical);

  spec.shift = 0.5;
  const SyntheticSplit shifted = generate_synthetic(spec);
  EXPECT_GT(oracle::ks_statistic(b_scores(shifted.train), b_scores(shifted.test)), critical);
}

TEST(Synthetic, ExactPositiveCounts) {
  SynthSpec spec;
  spec.n_a = 101;
  spec.n_b = 40;
  spec.rate_a = 0.3;
  spec.rate_b = 0.75;
  const Dataset d = generate_synthetic(spec).train;
  const auto c = oracle::double_loop(d.samples, "a");
  EXPECT_EQ(c.n1_a, 30);
  EXPECT_EQ(c.n1_b, 30);
}

TEST(Synthetic, InvalidSpecsRejected) {
  SynthSpec spec;
  spec.rate_a = 1.0;
  EXPECT_THROW(generate_synthetic(spec), SpecError);
  EXPECT_THROW(parse_synth_spec("n_a=5,bogus=1"), SpecError);
  EXPECT_THROW(parse_synth_spec("n_a=five"), SpecError);
  const SynthSpec p = parse_synth_spec("n_a=5,n_b=6,rate_b=0.25,seed=9,shift=-0.5");
  EXPECT_EQ(p.n_a, 5u);
  EXPECT_EQ(p.n_b, 6u);
  EXPECT_EQ(p.rate_b, 0.25);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(p.shift, -0.5);
}

TEST(SplitDataset, DeterministicPartition) {
  SynthSpec spec;
  spec.n_a = 60;
  spec.n_b = 40;
  const Dataset d = generate_synthetic(spec).train;
  const auto [train, test] = split_dataset(d, 0.7, 5);
  EXPECT_EQ(train.rows.size(), 70u);
  EXPECT_EQ(test.rows.size(), 30u);
  const auto again = split_dataset(d, 0.7, 5);
  EXPECT_TRUE(again.first == train);
  EXPECT_THROW(split_dataset(d, 1.0, 5), SpecError);
}

TEST(RunAdjust, LambdaZeroKeepsTrainAuc) {
  SynthSpec spec;
  spec.n_a = 120;
  spec.n_b = 90;
  spec.mean_pos_b = 0.3;
  spec.seed = 2;
  const Dataset d = generate_synthetic(spec).train;
  const AdjustOutcome out = run_adjust(d, nullptr, ObjectiveConfig{});
  EXPECT_GE(*out.train.after.auc, *out.train.before.auc);
  EXPECT_FALSE(out.test.has_value());
}

TEST(RunAdjust, DisparityOnlyMeetsTrainBound) {
  SynthSpec spec;
  spec.n_a = 150;
  spec.n_b = 100;
  spec.rate_b = 0.2;
  spec.mean_pos_b = 0.0;
  spec.seed = 6;
  const Dataset d = generate_synthetic(spec).train;
  ObjectiveConfig cfg;
  cfg.disparity_only = true;
  const AdjustOutcome out = run_adjust(d, nullptr, cfg);
  const auto& c = out.train.after.counts;
  EXPECT_LE(*out.train.after.delta_xauc,
            std::max(1.0 / static_cast<double>(c.n1_a), 1.0 / static_cast<double>(c.n1_b)));
}

TEST(RunSweep, GridZeroRowsAndLabels) {
  SynthSpec spec;
  spec.n_a = 50;
  spec.n_b = 40;
  spec.n_test_a = 20;
  spec.n_test_b = 20;
  const SyntheticSplit s = generate_synthetic(spec);
  const SweepOutcome out = run_sweep(s.train, &s.test, {0.0}, DisparityMetric::XAUC, 1);
  ASSERT_EQ(out.rows.size(), 6u);
  EXPECT_EQ(out.rows[0].lambda, "baseline");
  EXPECT_EQ(out.rows[1].lambda, "baseline");
  EXPECT_EQ(out.rows[2].lambda, "0");
  EXPECT_EQ(out.rows[4].lambda, "inf");
  EXPECT_EQ(out.point_labels.size(), 3u);
}

TEST(AutoGrid, StartsAtZeroAndGrows) {
  SynthSpec spec;
  spec.n_a = 80;
  spec.n_b = 60;
  spec.mean_pos_b = 0.0;
  const Dataset d = generate_synthetic(spec).train;
  std::vector<ScoredSample> s = d.samples;
  const RankedGroup a = rank_within_group(s, d.group_a);
  const RankedGroup b = rank_within_group(s, d.group_b);
  const auto grid = auto_lambda_grid(a, b, DisparityMetric::XAUC, AutoGridOptions{});
  ASSERT_GE(grid.size(), 2u);
  EXPECT_EQ(grid[0], 0.0);
  EXPECT_EQ(grid[1], 0.01);
  for (std::size_t t = 1; t < grid.size(); ++t) EXPECT_GT(grid[t], grid[t - 1]);
}

}  // namespace
}  // namespace xorder

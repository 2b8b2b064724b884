#include "xorder/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "xorder/dataset.hpp"
#include "xorder/errors.hpp"
#include "xorder/optimizer.hpp"
#include "xorder/pipeline.hpp"
#include "xorder/report_io.hpp"
#include "xorder/synthetic.hpp"

namespace xorder {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input;
  std::string test;
  std::string metric = "xauc";
  std::optional<double> lambda;
  std::vector<double> grid;
  bool disparity_only = false;
  bool auto_grid = false;
  AutoGridOptions auto_options;
  std::string anchor = "auto";
  ColumnMap columns;
  std::optional<double> split;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "json";
  unsigned threads = 0;
  bool emit_points = false;
  std::uint64_t budget = 1'000'000;
  std::string synth_spec;
};

DisparityMetric parse_metric(const std::string& m) {
  return m == "prf" ? DisparityMetric::PRF : DisparityMetric::XAUC;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
}

fs::path output_dir(const Options& o) {
  fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::string csv_text(const Dataset& d, const std::vector<double>& adjusted) {
  std::ostringstream ss;
  write_csv(ss, d, std::span<const double>(adjusted));
  return ss.str();
}

// Loads train (and optional test) according to --test / --split.
std::pair<Dataset, std::optional<Dataset>> load_splits(const Options& o) {
  Dataset train = ingest_csv(o.input, o.columns, o.anchor);
  if (!o.test.empty()) {
    if (o.split) throw SpecError("--split cannot be combined with --test");
    Dataset test = ingest_csv_like(o.test, train);
    return {std::move(train), std::move(test)};
  }
  if (o.split) {
    auto [tr, te] = split_dataset(train, *o.split, o.seed);
    return {std::move(tr), std::move(te)};
  }
  return {std::move(train), std::nullopt};
}

ObjectiveConfig objective_from(const Options& o) {
  ObjectiveConfig config;
  config.metric = parse_metric(o.metric);
  if (o.disparity_only == o.lambda.has_value()) {
    throw SpecError("give exactly one of --lambda or --disparity-only");
  }
  config.disparity_only = o.disparity_only;
  config.lambda = o.lambda.value_or(0.0);
  return config;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  const Dataset data = ingest_csv(o.input, o.columns, o.anchor);
  const FairnessReport r = fairness_report(data.samples, data.group_a, data.group_b);
  print_warnings(err, r.warnings);
  const bool csv = o.format == "csv";
  const std::string text = csv ? report_csv(r) : report_json(r) + "\n";
  out << text;
  if (!o.out_dir.empty()) write_file(output_dir(o) / (csv ? "report.csv" : "report.json"), text);
  return kExitOk;
}

int cmd_adjust(const Options& o, std::ostream& out, std::ostream& err) {
  const ObjectiveConfig config = objective_from(o);
  const auto [train, test] = load_splits(o);
  const AdjustOutcome result = run_adjust(train, test ? &*test : nullptr, config);
  print_warnings(err, result.warnings);

  const fs::path dir = output_dir(o);
  write_file(dir / "adjusted_train.csv", csv_text(train, result.train.adjusted_scores));
  if (test) write_file(dir / "adjusted_test.csv", csv_text(*test, result.test->adjusted_scores));

  RunDescription run{"adjust", train.source, test ? test->source : std::string()};
  if (o.split) {
    run.train_source = fmt::format("{} (split {} seed {}, train)", train.source, *o.split, o.seed);
    run.test_source = fmt::format("{} (split {} seed {}, test)", train.source, *o.split, o.seed);
  }
  if (o.format == "csv") {
    std::string text = "split,stage,metric,value\n";
    auto add = [&](const char* split, const char* stage, const FairnessReport& r) {
      std::istringstream lines(report_csv(r));
      std::string line;
      std::getline(lines, line);  // header
      while (std::getline(lines, line)) text += fmt::format("{},{},{}\n", split, stage, line);
    };
    add("train", "before", result.train.before);
    add("train", "after", result.train.after);
    if (result.test) {
      add("test", "before", result.test->before);
      add("test", "after", result.test->after);
    }
    write_file(dir / "report.csv", text);
  } else {
    write_file(dir / "report.json", adjust_summary_json(result, train, run));
  }
  out << fmt::format("train auc {} -> {}, delta_xauc {} -> {}\n",
                     format_double(result.train.before.auc.value_or(0.0)),
                     format_double(result.train.after.auc.value_or(0.0)),
                     format_double(result.train.before.delta_xauc.value_or(0.0)),
                     format_double(result.train.after.delta_xauc.value_or(0.0)));
  if (result.test) {
    out << fmt::format("test  auc {} -> {}, delta_xauc {} -> {}\n",
                       format_double(result.test->before.auc.value_or(0.0)),
                       format_double(result.test->after.auc.value_or(0.0)),
                       format_double(result.test->before.delta_xauc.value_or(0.0)),
                       format_double(result.test->after.delta_xauc.value_or(0.0)));
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const DisparityMetric metric = parse_metric(o.metric);
  const auto [train, test] = load_splits(o);
  std::vector<double> grid = o.grid;
  if (o.auto_grid == !grid.empty()) throw SpecError("give exactly one of --grid or --auto-grid");
  if (o.auto_grid) {
    const RankedGroup a = rank_within_group(train.samples, train.group_a);
    const RankedGroup b = rank_within_group(train.samples, train.group_b);
    grid = auto_lambda_grid(a, b, metric, o.auto_options);
  }
  const SweepOutcome sweep = run_sweep(train, test ? &*test : nullptr, grid, metric, o.threads);
  print_warnings(err, sweep.warnings);

  const fs::path dir = output_dir(o);
  std::ostringstream curve;
  write_curve_csv(curve, sweep);
  write_file(dir / "curve.csv", curve.str());
  if (o.emit_points) {
    fs::create_directories(dir / "points");
    for (std::size_t p = 0; p < sweep.point_labels.size(); ++p) {
      write_file(dir / "points" / fmt::format("train_{:03}.csv", p),
                 csv_text(train, sweep.train_scores[p]));
      if (test) {
        write_file(dir / "points" / fmt::format("test_{:03}.csv", p),
                   csv_text(*test, sweep.test_scores[p]));
      }
    }
  }
  out << curve.str();
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& /*err*/) {
  ObjectiveConfig config = objective_from(o);
  const Dataset data = ingest_csv(o.input, o.columns, o.anchor);
  const RankedGroup a = rank_within_group(data.samples, data.group_a);
  const RankedGroup b = rank_within_group(data.samples, data.group_b);
  const CrossGroupOrdering best = brute_force_optimal(a, b, config, o.budget);
  const CrossGroupOrdering dp = xorder_dp(a, b, config);

  std::string text = "method,auc,delta_xauc,delta_prf,steps\n";
  for (const auto& [name, ord] : {std::pair{"brute_force", &best}, std::pair{"xorder_dp", &dp}}) {
    const FairnessReport r = metrics_from_ordering(*ord, a, b);
    std::string steps;
    for (Step s : ord->steps) steps += s == Step::TakeA ? 'a' : 'b';
    text += fmt::format("{},{},{},{},{}\n", name, format_double(r.auc.value_or(0.0)),
                        r.delta_xauc ? format_double(*r.delta_xauc) : "",
                        r.delta_prf ? format_double(*r.delta_prf) : "", steps);
  }
  out << text;
  if (!o.out_dir.empty()) write_file(output_dir(o) / "oracle.csv", text);
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream& /*err*/, bool seed_given) {
  SynthSpec spec = parse_synth_spec(o.synth_spec);
  if (seed_given) spec.seed = o.seed;
  const SyntheticSplit data = generate_synthetic(spec);
  const fs::path dir = output_dir(o);
  std::ostringstream train;
  write_csv(train, data.train);
  write_file(dir / "train.csv", train.str());
  if (!data.test.rows.empty()) {
    std::ostringstream test;
    write_csv(test, data.test);
    write_file(dir / "test.csv", test.str());
  }
  out << fmt::format("wrote {} train and {} test rows to {}\n", data.train.rows.size(),
                     data.test.rows.size(), dir.string());
  return kExitOk;
}

void add_columns(CLI::App* cmd, Options& o) {
  cmd->add_option("--id-col", o.columns.id, "id column name");
  cmd->add_option("--group-col", o.columns.group, "group column name");
  cmd->add_option("--label-col", o.columns.label, "label column name");
  cmd->add_option("--score-col", o.columns.score, "score column name");
  cmd->add_option("--anchor-group", o.anchor,
                  "group whose scores stay fixed, or 'auto' (higher PRF)");
}

void add_objective(CLI::App* cmd, Options& o) {
  cmd->add_option("--metric", o.metric, "disparity metric")
      ->check(CLI::IsMember({"xauc", "prf"}));
  auto* lambda = cmd->add_option("--lambda", o.lambda, "utility/disparity trade-off weight");
  auto* only = cmd->add_flag("--disparity-only", o.disparity_only, "minimize disparity alone");
  lambda->excludes(only);
}

void add_split(CLI::App* cmd, Options& o) {
  cmd->add_option("--test", o.test, "held-out CSV with the same schema");
  cmd->add_option("--split", o.split, "train fraction when only one file is given")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", o.seed, "seed for --split");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fair cross-group re-ordering of bipartite ranking scores"};
  app.require_subcommand(1);

  auto* report = app.add_subcommand("report", "utility and fairness metrics of a scored CSV");
  report->add_option("csv", o.input)->required();
  add_columns(report, o);
  add_output(report, o);

  auto* adjust = app.add_subcommand("adjust", "learn a fair ordering and adjust scores");
  adjust->add_option("train", o.input)->required();
  add_columns(adjust, o);
  add_objective(adjust, o);
  add_split(adjust, o);
  add_output(adjust, o);

  auto* sweep = app.add_subcommand("sweep", "trade-off curve over a lambda grid");
  sweep->add_option("train", o.input)->required();
  add_columns(sweep, o);
  add_split(sweep, o);
  add_output(sweep, o);
  sweep->add_option("--metric", o.metric, "disparity metric")
      ->check(CLI::IsMember({"xauc", "prf"}));
  auto* grid = sweep->add_option("--grid", o.grid, "comma-separated lambda values")
                   ->delimiter(',');
  auto* auto_grid =
      sweep->add_flag("--auto-grid", o.auto_grid, "grow lambda until the disparity stalls");
  grid->excludes(auto_grid);
  sweep->add_option("--auto-start", o.auto_options.start, "first nonzero lambda of --auto-grid");
  sweep->add_option("--auto-factor", o.auto_options.factor, "growth factor of --auto-grid");
  sweep->add_option("--auto-steps", o.auto_options.max_steps, "max steps of --auto-grid");
  sweep->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sweep->add_flag("--emit-points", o.emit_points, "write adjusted CSVs for every curve point");

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum versus the lattice DP");
  oracle->add_option("csv", o.input)->required();
  add_columns(oracle, o);
  add_objective(oracle, o);
  oracle->add_option("--budget", o.budget, "max interleavings to enumerate");
  oracle->add_option("--out", o.out_dir, "output directory");

  auto* synth = app.add_subcommand("synth", "generate a synthetic train/test pair");
  synth->add_option("--spec", o.synth_spec, "key=value,... generator parameters");
  auto* synth_seed = synth->add_option("--seed", o.seed, "overrides seed in --spec");
  synth->add_option("--out", o.out_dir, "output directory");

  std::vector<std::string> argv_tail(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(argv_tail));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (report->parsed()) return cmd_report(o, out, err);
    if (adjust->parsed()) return cmd_adjust(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (oracle->parsed()) return cmd_oracle(o, out, err);
    if (synth->parsed()) return cmd_synth(o, out, err, synth_seed->count() > 0);
  } catch (const CapacityExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const EmptyClass& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const EmptyGroup& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const EmptyMapping& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace xorder

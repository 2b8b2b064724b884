#include "xorder/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

using Wide = __int128;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

CrossCounts extend_a(CrossCounts c, const RankedGroup& a, const RankedGroup& b, std::size_t i,
                     std::size_t j) {
  // a(i+1) appended at lattice point (i, j): it beats the b negatives still to come.
  if (a.labels[i] == 1) c.ab += b.suffix_neg[j];
  return c;
}

CrossCounts extend_b(CrossCounts c, const RankedGroup& a, const RankedGroup& b, std::size_t i,
                     std::size_t j) {
  if (b.labels[j] == 1) c.ba += a.suffix_neg[i];
  return c;
}

class BitGrid {
 public:
  BitGrid(std::size_t rows, std::size_t cols) : cols_(cols), words_((rows * cols + 63) / 64) {}
  void set(std::size_t r, std::size_t c) {
    const std::size_t k = r * cols_ + c;
    words_[k >> 6] |= std::uint64_t{1} << (k & 63);
  }
  bool get(std::size_t r, std::size_t c) const {
    const std::size_t k = r * cols_ + c;
    return (words_[k >> 6] >> (k & 63)) & 1U;
  }

 private:
  std::size_t cols_;
  std::vector<std::uint64_t> words_;
};

}  // namespace

const char* to_string(DisparityMetric metric) {
  return metric == DisparityMetric::XAUC ? "xauc" : "prf";
}

Objective::Objective(const RankedGroup& a, const RankedGroup& b, const ObjectiveConfig& config)
    : config_(config),
      counts_(group_counts(a, b)),
      wins_a_(a.within_wins),
      wins_b_(b.within_wins) {
  if (!std::isfinite(config.lambda) || config.lambda < 0.0) {
    throw SpecError("lambda must be a finite nonnegative number");
  }
  const bool penalized = config.disparity_only || config.lambda > 0.0;
  if (!penalized) return;
  if (config.metric == DisparityMetric::XAUC) {
    if (counts_.k_ab() == 0 || counts_.k_ba() == 0) {
      throw EmptyClass("xAUC disparity needs a positive and a negative in each group");
    }
  } else if (counts_.n1_a == 0 || counts_.n1_b == 0 || counts_.n0() == 0) {
    throw EmptyClass("PRF disparity needs a positive in each group and a negative");
  }
}

Wide Objective::disparity_numerator(const CrossCounts& c) const {
  if (config_.metric == DisparityMetric::XAUC) {
    return wide_abs(static_cast<Wide>(c.ab) * counts_.k_ba() -
                    static_cast<Wide>(c.ba) * counts_.k_ab());
  }
  return wide_abs(static_cast<Wide>(c.ab + wins_a_) * counts_.n1_b -
                  static_cast<Wide>(c.ba + wins_b_) * counts_.n1_a);
}

std::int64_t Objective::disparity_denominator() const {
  if (config_.metric == DisparityMetric::XAUC) return counts_.k_ab() * counts_.k_ba();
  return counts_.n1_a * counts_.n1_b * counts_.n0();
}

Rate Objective::disparity(const CrossCounts& c) const {
  if (config_.metric == DisparityMetric::XAUC) {
    return delta_xauc_exact(counts_, c.ab, c.ba);
  }
  return delta_prf_exact(counts_, c.ab + wins_a_, c.ba + wins_b_);
}

double Objective::value(const CrossCounts& c) const {
  if (config_.disparity_only) {
    return -(static_cast<double>(disparity_numerator(c)) /
             static_cast<double>(disparity_denominator()));
  }
  const double utility = static_cast<double>(c.ab + c.ba);
  if (config_.lambda == 0.0) return utility;
  const double gap = static_cast<double>(disparity_numerator(c)) /
                     static_cast<double>(disparity_denominator());
  return utility - config_.lambda * static_cast<double>(counts_.k()) * gap;
}

bool Objective::better(const CrossCounts& lhs, const CrossCounts& rhs) const {
  if (config_.disparity_only) return disparity_numerator(lhs) < disparity_numerator(rhs);
  if (config_.lambda == 0.0) return lhs.ab + lhs.ba > rhs.ab + rhs.ba;
  return value(lhs) > value(rhs);
}

CrossGroupOrdering xorder_dp(const RankedGroup& a, const RankedGroup& b,
                             const ObjectiveConfig& config) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na == 0 || nb == 0) throw EmptyGroup("xorder_dp needs two nonempty groups");
  if (static_cast<unsigned __int128>(na) * nb > config.cell_budget) {
    throw CapacityExceeded("lattice of " + std::to_string(na) + " x " + std::to_string(nb) +
                           " exceeds the cell budget");
  }
  const Objective objective(a, b, config);

  // bit set => best path to (i, j) arrives by taking a(i).
  BitGrid from_a(na + 1, nb + 1);
  std::vector<CrossCounts> prev(nb + 1);
  std::vector<CrossCounts> cur(nb + 1);
  for (std::size_t j = 1; j <= nb; ++j) prev[j] = extend_b(prev[j - 1], a, b, 0, j - 1);

  for (std::size_t i = 1; i <= na; ++i) {
    cur[0] = extend_a(prev[0], a, b, i - 1, 0);
    from_a.set(i, 0);
    for (std::size_t j = 1; j <= nb; ++j) {
      const CrossCounts via_a = extend_a(prev[j], a, b, i - 1, j);
      const CrossCounts via_b = extend_b(cur[j - 1], a, b, i, j - 1);
      if (objective.better(via_a, via_b)) {
        cur[j] = via_a;
        from_a.set(i, j);
      } else {
        cur[j] = via_b;
      }
    }
    std::swap(prev, cur);
  }

  CrossGroupOrdering out;
  out.steps.resize(na + nb);
  std::size_t i = na;
  std::size_t j = nb;
  for (std::size_t k = na + nb; k-- > 0;) {
    const bool take_a = j == 0 || (i > 0 && from_a.get(i, j));
    out.steps[k] = take_a ? Step::TakeA : Step::TakeB;
    (take_a ? i : j) -= 1;
  }
  return out;
}

std::vector<DpCell> replay_path(const CrossGroupOrdering& ordering, const RankedGroup& a,
                                const RankedGroup& b, const ObjectiveConfig& config) {
  ordering.validate(a, b);
  const Objective objective(a, b, config);
  std::vector<DpCell> cells;
  cells.reserve(ordering.steps.size() + 1);
  CrossCounts c;
  DpCell cell;
  cell.ghat = objective.value(c);
  cells.push_back(cell);
  for (Step s : ordering.steps) {
    if (s == Step::TakeA) {
      c = extend_a(c, a, b, cell.i, cell.j);
      cell.i += 1;
      cell.back = Back::FromA;
    } else {
      c = extend_b(c, a, b, cell.i, cell.j);
      cell.j += 1;
      cell.back = Back::FromB;
    }
    cell.c_ab = c.ab;
    cell.c_ba = c.ba;
    cell.ghat = objective.value(c);
    cells.push_back(cell);
  }
  return cells;
}

CrossGroupOrdering greedy_forward(const RankedGroup& a, const RankedGroup& b,
                                  DisparityMetric metric) {
  ObjectiveConfig config;
  config.metric = metric;
  config.disparity_only = true;
  const Objective objective(a, b, config);

  CrossGroupOrdering out;
  out.steps.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  CrossCounts c;
  while (i < a.size() || j < b.size()) {
    bool take_a = j == b.size();
    if (i < a.size() && j < b.size()) {
      take_a = !objective.better(extend_b(c, a, b, i, j), extend_a(c, a, b, i, j));
    }
    if (take_a) {
      c = extend_a(c, a, b, i++, j);
      out.steps.push_back(Step::TakeA);
    } else {
      c = extend_b(c, a, b, i, j++);
      out.steps.push_back(Step::TakeB);
    }
  }
  return out;
}

CrossGroupOrdering insertion_baseline(const RankedGroup& a, const RankedGroup& b,
                                      DisparityMetric metric) {
  ObjectiveConfig config;
  config.metric = metric;
  config.disparity_only = true;
  const Objective objective(a, b, config);

  // The disparity of a block insertion is monotone-then-absolute in the
  // insertion point, so its minimizer is the sign-change (crossing) index.
  auto best_split = [&](const RankedGroup& host, auto cross_at) {
    std::size_t best = 0;
    CrossCounts best_counts = cross_at(0);
    for (std::size_t t = 1; t <= host.size(); ++t) {
      const CrossCounts c = cross_at(t);
      if (objective.better(c, best_counts)) {
        best = t;
        best_counts = c;
      }
    }
    return std::pair{best, best_counts};
  };

  // Block b after the first t elements of a.
  const auto [ta, ca] = best_split(a, [&](std::size_t t) {
    return CrossCounts{a.prefix_pos[t] * b.n0(), b.n1() * a.suffix_neg[t]};
  });
  // Block a after the first t elements of b.
  const auto [tb, cb] = best_split(b, [&](std::size_t t) {
    return CrossCounts{a.n1() * b.suffix_neg[t], b.prefix_pos[t] * a.n0()};
  });

  CrossGroupOrdering out;
  out.steps.reserve(a.size() + b.size());
  if (!objective.better(cb, ca)) {
    out.steps.insert(out.steps.end(), ta, Step::TakeA);
    out.steps.insert(out.steps.end(), b.size(), Step::TakeB);
    out.steps.insert(out.steps.end(), a.size() - ta, Step::TakeA);
  } else {
    out.steps.insert(out.steps.end(), tb, Step::TakeB);
    out.steps.insert(out.steps.end(), a.size(), Step::TakeA);
    out.steps.insert(out.steps.end(), b.size() - tb, Step::TakeB);
  }
  return out;
}

namespace {

// Exhaustive interleaving search. Scores each complete path directly from
// the objective's definition rather than from the lattice update rule.
class BruteForce {
 public:
  BruteForce(const RankedGroup& a, const RankedGroup& b, const ObjectiveConfig& config)
      : a_(a), b_(b), config_(config), counts_(group_counts(a, b)) {
    path_.reserve(a.size() + b.size());
  }

  CrossGroupOrdering run() {
    visit(0, 0, 0, 0, 0, 0);
    return CrossGroupOrdering{best_};
  }

 private:
  void visit(std::size_t i, std::size_t j, std::int64_t neg_a_placed, std::int64_t neg_b_placed,
             std::int64_t wins_ab, std::int64_t wins_ba) {
    if (i == a_.size() && j == b_.size()) {
      consider(wins_ab, wins_ba);
      return;
    }
    if (i < a_.size()) {
      path_.push_back(Step::TakeA);
      if (a_.labels[i] == 1) {
        visit(i + 1, j, neg_a_placed, neg_b_placed, wins_ab + (counts_.n0_b - neg_b_placed),
              wins_ba);
      } else {
        visit(i + 1, j, neg_a_placed + 1, neg_b_placed, wins_ab, wins_ba);
      }
      path_.pop_back();
    }
    if (j < b_.size()) {
      path_.push_back(Step::TakeB);
      if (b_.labels[j] == 1) {
        visit(i, j + 1, neg_a_placed, neg_b_placed, wins_ab,
              wins_ba + (counts_.n0_a - neg_a_placed));
      } else {
        visit(i, j + 1, neg_a_placed, neg_b_placed + 1, wins_ab, wins_ba);
      }
      path_.pop_back();
    }
  }

  Rate disparity(std::int64_t wins_ab, std::int64_t wins_ba) const {
    if (config_.metric == DisparityMetric::XAUC) {
      return delta_xauc_exact(counts_, wins_ab, wins_ba);
    }
    return delta_prf_exact(counts_, wins_ab + a_.within_wins, wins_ba + b_.within_wins);
  }

  void consider(std::int64_t wins_ab, std::int64_t wins_ba) {
    bool improves = false;
    if (config_.disparity_only) {
      const Rate d = disparity(wins_ab, wins_ba);
      improves = !have_best_ || d < best_disparity_;
      if (improves) best_disparity_ = d;
    } else if (config_.lambda == 0.0) {
      const std::int64_t wins = wins_ab + wins_ba;
      improves = !have_best_ || wins > best_wins_;
      if (improves) best_wins_ = wins;
    } else {
      const double auc =
          static_cast<double>(wins_ab + wins_ba + a_.within_wins + b_.within_wins) /
          static_cast<double>(counts_.k());
      const double j = auc - config_.lambda * disparity(wins_ab, wins_ba).value();
      improves = !have_best_ || j > best_j_;
      if (improves) best_j_ = j;
    }
    if (improves) {
      have_best_ = true;
      best_ = path_;
    }
  }

  const RankedGroup& a_;
  const RankedGroup& b_;
  ObjectiveConfig config_;
  GroupCounts counts_;
  std::vector<Step> path_;
  std::vector<Step> best_;
  bool have_best_ = false;
  Rate best_disparity_;
  std::int64_t best_wins_ = 0;
  double best_j_ = 0.0;
};

std::uint64_t capped_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  unsigned __int128 v = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    v = v * (n - k + t) / t;
    if (v > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

CrossGroupOrdering brute_force_optimal(const RankedGroup& a, const RankedGroup& b,
                                       const ObjectiveConfig& config,
                                       std::uint64_t path_budget) {
  if (a.size() == 0 || b.size() == 0) throw EmptyGroup("brute force needs two nonempty groups");
  // Validates lambda and the denominators the objective needs.
  const Objective objective(a, b, config);
  if (!config.disparity_only && objective.counts().k() == 0) {
    throw EmptyClass("AUC needs positives and negatives");
  }
  const std::uint64_t paths = capped_binomial(a.size() + b.size(), a.size(), path_budget);
  if (paths > path_budget) {
    throw CapacityExceeded("number of interleavings exceeds the brute-force budget");
  }
  return BruteForce(a, b, config).run();
}

TradeoffCurve sweep_lambda(const RankedGroup& a, const RankedGroup& b,
                           std::span<const double> lambda_grid, DisparityMetric metric,
                           unsigned threads) {
  if (lambda_grid.empty()) throw SpecError("lambda grid is empty");
  for (std::size_t t = 0; t < lambda_grid.size(); ++t) {
    if (!std::isfinite(lambda_grid[t]) || lambda_grid[t] < 0.0) {
      throw SpecError("lambda grid values must be finite and nonnegative");
    }
    if (t > 0 && !(lambda_grid[t] > lambda_grid[t - 1])) {
      throw SpecError("lambda grid must be strictly increasing");
    }
  }

  auto make_point = [&](CrossGroupOrdering ordering) {
    const FairnessReport r = metrics_from_ordering(ordering, a, b);
    CurvePoint p;
    p.auc = r.auc.value_or(0.0);
    p.delta_xauc = r.delta_xauc;
    p.delta_prf = r.delta_prf;
    p.ordering = std::move(ordering);
    return p;
  };

  std::vector<ObjectiveConfig> configs;
  for (double lambda : lambda_grid) {
    configs.push_back(ObjectiveConfig{lambda, metric, false});
  }
  configs.push_back(ObjectiveConfig{0.0, metric, true});

  TradeoffCurve curve;
  curve.baseline = make_point(ordering_from_scores(a, b));
  curve.baseline.baseline = true;
  curve.points.resize(configs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < configs.size(); t = next++) {
      try {
        CurvePoint p = make_point(xorder_dp(a, b, configs[t]));
        p.lambda = configs[t].lambda;
        p.disparity_only = configs[t].disparity_only;
        curve.points[t] = std::move(p);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return curve;
}

}  // namespace xorder

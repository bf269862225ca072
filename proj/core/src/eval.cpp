#include "zsl/eval.hpp"

#include "zsl/hubness.hpp"
#include "zsl/regression.hpp"
#include "zsl/reporting.hpp"
#include "zsl/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace zsl {

std::string MethodSpec::name() const {
  std::string n =
      direction == Direction::SourceToTarget ? "ridge-xy" : "ridge-yx";
  if (use_nicdm) n += "+nicdm";
  return n;
}

RankingTask make_ranking_task(const PairedDataset& test) {
  if (test.size() == 0)
    throw std::invalid_argument("make_ranking_task: empty test set");

  RankingTask task;
  std::unordered_map<std::string, int> query_of;
  std::unordered_map<std::string, int> target_of;
  std::vector<int> query_cols;
  std::vector<int> target_cols;
  const int n = static_cast<int>(test.size());
  for (int j = 0; j < n; ++j) {
    if (query_of.emplace(test.source_ids[j], static_cast<int>(query_cols.size()))
            .second)
      query_cols.push_back(j);
    if (target_of.emplace(test.target_ids[j], static_cast<int>(target_cols.size()))
            .second)
      target_cols.push_back(j);
  }

  task.queries.resize(test.source.rows(),
                      static_cast<Eigen::Index>(query_cols.size()));
  task.query_ids.reserve(query_cols.size());
  for (std::size_t q = 0; q < query_cols.size(); ++q) {
    task.queries.col(static_cast<Eigen::Index>(q)) =
        test.source.col(query_cols[q]);
    task.query_ids.push_back(test.source_ids[static_cast<std::size_t>(query_cols[q])]);
  }
  task.targets.resize(test.target.rows(),
                      static_cast<Eigen::Index>(target_cols.size()));
  task.target_ids.reserve(target_cols.size());
  for (std::size_t t = 0; t < target_cols.size(); ++t) {
    task.targets.col(static_cast<Eigen::Index>(t)) =
        test.target.col(target_cols[t]);
    task.target_ids.push_back(test.target_ids[static_cast<std::size_t>(target_cols[t])]);
  }

  task.gold.assign(query_cols.size(), {});
  for (int j = 0; j < n; ++j) {
    const int q = query_of.at(test.source_ids[j]);
    const int t = target_of.at(test.target_ids[j]);
    auto& set = task.gold[static_cast<std::size_t>(q)];
    if (std::find(set.begin(), set.end(), t) == set.end()) set.push_back(t);
  }
  return task;
}

double average_precision(const Ranking& ranking, const std::vector<int>& gold) {
  if (gold.empty()) throw std::invalid_argument("average_precision: empty gold");
  std::unordered_set<int> gold_set(gold.begin(), gold.end());
  double sum = 0.0;
  int hits = 0;
  for (std::size_t pos = 0; pos < ranking.ordered.size(); ++pos) {
    if (gold_set.count(ranking.ordered[pos].target)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  if (hits != static_cast<int>(gold_set.size()))
    throw std::invalid_argument(
        "average_precision: a gold target is missing from the ranking");
  return sum / static_cast<double>(gold_set.size());
}

double mean_average_precision(const std::vector<Ranking>& rankings,
                              const GoldAssignment& gold) {
  if (rankings.size() != gold.size())
    throw std::invalid_argument(
        "mean_average_precision: a query is missing its gold set");
  if (rankings.empty())
    throw std::invalid_argument("mean_average_precision: no rankings");
  double sum = 0.0;
  for (std::size_t i = 0; i < rankings.size(); ++i)
    sum += average_precision(rankings[i], gold[i]);
  return sum / static_cast<double>(rankings.size());
}

namespace {

bool top_k_hit(const Ranking& ranking, const std::vector<int>& gold, int k) {
  std::unordered_set<int> gold_set(gold.begin(), gold.end());
  const int limit = std::min<int>(k, static_cast<int>(ranking.ordered.size()));
  for (int j = 0; j < limit; ++j)
    if (gold_set.count(ranking.ordered[j].target)) return true;
  return false;
}

}  // namespace

double top_k_accuracy(const std::vector<Ranking>& rankings,
                      const GoldAssignment& gold, int k) {
  if (k < 1) throw std::invalid_argument("top_k_accuracy: k must be >= 1");
  if (rankings.size() != gold.size())
    throw std::invalid_argument("top_k_accuracy: a query is missing its gold set");
  if (rankings.empty()) throw std::invalid_argument("top_k_accuracy: no rankings");
  int hits = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i)
    hits += top_k_hit(rankings[i], gold[i], k) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

double top_k_accuracy_macro(const std::vector<Ranking>& rankings,
                            const GoldAssignment& gold, int k) {
  if (k < 1) throw std::invalid_argument("top_k_accuracy_macro: k must be >= 1");
  if (rankings.size() != gold.size())
    throw std::invalid_argument(
        "top_k_accuracy_macro: a query is missing its gold set");
  std::map<int, std::pair<int, int>> per_target;  // target -> (hits, queries)
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const bool hit = top_k_hit(rankings[i], gold[i], k);
    for (int t : gold[i]) {
      auto& [hits, total] = per_target[t];
      hits += hit ? 1 : 0;
      ++total;
    }
  }
  if (per_target.empty())
    throw std::invalid_argument("top_k_accuracy_macro: no gold targets");
  double sum = 0.0;
  for (const auto& [t, stats] : per_target)
    sum += static_cast<double>(stats.first) / static_cast<double>(stats.second);
  return sum / static_cast<double>(per_target.size());
}

namespace {

// Rankings of the task's vocabulary under one method, given a model already
// fitted in the method's direction.
std::vector<Ranking> rank_task(const RankingTask& task, const RidgeModel& model,
                               const MethodSpec& method) {
  DissimilarityMatrix dist;
  if (method.direction == Direction::SourceToTarget) {
    dist = pairwise_euclidean(model.predict(task.queries), task.targets);
  } else {
    dist = pairwise_euclidean(task.queries, model.predict(task.targets));
  }
  if (method.use_nicdm) dist = nicdm(dist, method.nicdm_k);
  return rank_all(dist);
}

RidgeModel fit_for(const PairedDataset& train, Direction direction,
                   double lambda) {
  RidgeOptions options;
  options.direction = direction;
  if (direction == Direction::SourceToTarget)
    return fit_ridge(train.source, train.target, lambda, options);
  return fit_ridge(train.target, train.source, lambda, options);
}

std::string digest_of(const PairedDataset& train, const PairedDataset& test,
                      const ExperimentConfig& config) {
  std::ostringstream s;
  s << "train=" << train.size() << ";test=" << test.size()
    << ";src_dim=" << train.source.rows() << ";tgt_dim=" << train.target.rows()
    << ";macro=" << (config.macro_accuracy ? 1 : 0) << ";ks=";
  for (int k : config.k_list) s << k << ",";
  s << ";methods=";
  for (const auto& m : config.methods)
    s << m.name() << "@" << format_number(m.lambda) << "/k" << m.nicdm_k << ",";
  s << ";ids=";
  for (const auto& id : train.ids) s << id << ",";
  for (const auto& id : test.ids) s << id << ",";
  return hex64(fnv1a64(s.str()));
}

}  // namespace

CalibrationResult calibrate_lambda(const PairedDataset& train,
                                   Direction direction,
                                   std::vector<double> grid, int folds,
                                   std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("calibrate_lambda: empty grid");
  if (folds < 2) throw std::invalid_argument("calibrate_lambda: folds must be >= 2");
  const int n = static_cast<int>(train.size());
  if (n < 2 * folds)
    throw std::invalid_argument("calibrate_lambda: too few pairs for " +
                                std::to_string(folds) + " folds");
  for (double l : grid)
    if (!(l >= 0.0))
      throw std::invalid_argument("calibrate_lambda: negative lambda in grid");

  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::derive(seed, 0x63766373);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(0, i)]);

  // fold f holds out order[f], order[f + folds], ...
  std::vector<std::vector<int>> held_out(static_cast<std::size_t>(folds));
  for (int i = 0; i < n; ++i)
    held_out[static_cast<std::size_t>(i % folds)].push_back(order[i]);

  std::vector<double> mean_map(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<char> in_fold(static_cast<std::size_t>(n), 0);
    for (int i : held_out[static_cast<std::size_t>(f)])
      in_fold[static_cast<std::size_t>(i)] = 1;

    std::vector<int> fit_idx, val_idx;
    for (int i = 0; i < n; ++i)
      (in_fold[static_cast<std::size_t>(i)] ? val_idx : fit_idx).push_back(i);
    const PairedDataset fit_part = select_pairs(train, fit_idx);
    const PairedDataset validate_part = select_pairs(train, val_idx);

    const RankingTask task = make_ranking_task(validate_part);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      MethodSpec method;
      method.direction = direction;
      method.lambda = grid[g];
      const RidgeModel model = fit_for(fit_part, direction, grid[g]);
      const auto rankings = rank_task(task, model, method);
      mean_map[g] += mean_average_precision(rankings, task.gold);
    }
  }

  CalibrationResult best{grid.front(), -1.0};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double score = mean_map[g] / folds;
    if (score >= best.cv_map) {  // >= so ties go to the larger lambda
      best.lambda = grid[g];
      best.cv_map = score;
    }
  }
  return best;
}

std::vector<EvalReport> run_experiment(const PairedDataset& train,
                                       const PairedDataset& test,
                                       const ExperimentConfig& config) {
  if (config.methods.empty())
    throw std::invalid_argument("run_experiment: no methods");
  for (int k : config.k_list)
    if (k < 1) throw std::invalid_argument("run_experiment: k must be >= 1");

  const RankingTask task = make_ranking_task(test);
  const int num_targets = static_cast<int>(task.target_ids.size());
  const std::string digest = digest_of(train, test, config);

  std::vector<EvalReport> reports;
  reports.reserve(config.methods.size());
  for (const MethodSpec& method : config.methods) {
    const RidgeModel model = fit_for(train, method.direction, method.lambda);
    const auto rankings = rank_task(task, model, method);

    EvalReport report;
    report.method_name = method.name();
    report.map = mean_average_precision(rankings, task.gold);
    report.num_queries = static_cast<int>(rankings.size());
    report.config_digest = digest;
    for (int k : config.k_list) {
      report.acc[k] = config.macro_accuracy
                          ? top_k_accuracy_macro(rankings, task.gold, k)
                          : top_k_accuracy(rankings, task.gold, k);
      report.nk_skewness[k] =
          hubness_report(rankings, std::min(k, num_targets), num_targets)
              .skewness;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace zsl

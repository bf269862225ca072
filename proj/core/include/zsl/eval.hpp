#pragma once

#include "zsl/data.hpp"
#include "zsl/neighbors.hpp"
#include "zsl/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zsl {

/// Gold target indices per query, aligned with RankingTask::query_ids.
/// Every gold index refers into the ranked target vocabulary.
using GoldAssignment = std::vector<std::vector<int>>;

/// A retrieval problem: rank the target vocabulary for every query. Built
/// from a paired test set by deduplicating source tokens into queries and
/// target tokens into the vocabulary; a source paired with several targets
/// gets a multi-element gold set.
struct RankingTask {
  DataMatrix queries;
  std::vector<std::string> query_ids;
  DataMatrix targets;
  std::vector<std::string> target_ids;
  GoldAssignment gold;
};

RankingTask make_ranking_task(const PairedDataset& test);

/// Mean over gold items of (gold items ranked at or above it) / rank.
/// Equals the reciprocal rank when gold is a singleton.
double average_precision(const Ranking& ranking, const std::vector<int>& gold);

double mean_average_precision(const std::vector<Ranking>& rankings,
                              const GoldAssignment& gold);

/// Fraction of queries whose top-k list intersects the gold set.
double top_k_accuracy(const std::vector<Ranking>& rankings,
                      const GoldAssignment& gold, int k);

/// Macro variant: hit rate per distinct gold target, averaged over targets.
double top_k_accuracy_macro(const std::vector<Ranking>& rankings,
                            const GoldAssignment& gold, int k);

/// One compared system: a regression direction, an optional local-scale
/// correction of the distances, and the ridge parameter to fit with.
struct MethodSpec {
  Direction direction = Direction::SourceToTarget;
  bool use_nicdm = false;
  double lambda = 1.0;
  int nicdm_k = 10;

  std::string name() const;
};

struct CalibrationResult {
  double lambda = 0.0;
  double cv_map = 0.0;
};

/// Grid search by k-fold cross validation on the training pairs. Each
/// held-out fold is scored as its own retrieval problem: fold sources are
/// the validation queries and fold targets the candidate vocabulary, so the
/// selected value is tuned for ranking labels unseen during fitting. Ties
/// are broken toward the larger lambda.
CalibrationResult calibrate_lambda(const PairedDataset& train,
                                   Direction direction,
                                   std::vector<double> grid, int folds,
                                   std::uint64_t seed);

struct EvalReport {
  std::string method_name;
  double map = 0.0;
  std::map<int, double> acc;          // k -> top-k accuracy
  std::map<int, double> nk_skewness;  // k -> k-occurrence skewness
  int num_queries = 0;
  std::string config_digest;
};

struct ExperimentConfig {
  std::vector<MethodSpec> methods;
  std::vector<int> k_list = {1, 10};
  bool macro_accuracy = false;
};

/// Fits each method on the training pairs and scores it on the test pairs.
/// Source-to-target methods map queries into the target space and rank the
/// raw vocabulary there; target-to-source methods map the vocabulary into
/// the source space and rank the mapped targets against raw queries.
std::vector<EvalReport> run_experiment(const PairedDataset& train,
                                       const PairedDataset& test,
                                       const ExperimentConfig& config);

}  // namespace zsl

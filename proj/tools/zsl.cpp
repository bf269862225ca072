// zsl: regression-based zero-shot mapping experiments with hubness
// diagnostics and Monte Carlo verification of the library's distance and
// shrinkage properties.

#include "zsl/data.hpp"
#include "zsl/eval.hpp"
#include "zsl/hubness.hpp"
#include "zsl/neighbors.hpp"
#include "zsl/regression.hpp"
#include "zsl/reporting.hpp"
#include "zsl/rng.hpp"
#include "zsl/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitValidation = 1;
constexpr int kExitVerificationFailure = 2;

// Resolved flag values in insertion order; hashed into the digest that every
// report embeds, so identical invocations yield identical outputs.
class ResolvedConfig {
 public:
  void set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) {
    set(key, zsl::format_number(value));
  }
  void set(const std::string& key, long long value) {
    set(key, std::to_string(value));
  }

  std::string line() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
      if (!out.empty()) out += ' ';
      out += k + '=' + v;
    }
    return out;
  }
  std::string digest() const { return zsl::hex64(zsl::fnv1a64(line())); }
  ordered_json to_json() const {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + out_path);
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  if (values.empty()) throw std::runtime_error(std::string(what) + ": empty list");
  return values;
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string(what) + ": bad number '" + item + "'");
    }
  }
  if (values.empty()) throw std::runtime_error(std::string(what) + ": empty list");
  return values;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  int n = 2000;
  int latent = 1000;
  int dim = 100;
  int source_dim = -1;  // -1: use dim
  int target_dim = -1;
  std::uint64_t seed = 0;
  double train_fraction = -1.0;  // <0: single "all" split
  std::uint64_t split_seed = 0;
  std::string out_dir = ".";
  std::string source_out;
  std::string target_out;
  std::string manifest_out;
  int precision = 9;
};

int run_synth(const SynthArgs& args) {
  zsl::SyntheticConfig cfg;
  cfg.num_pairs = args.n;
  cfg.latent_dim = args.latent;
  cfg.source_dim = args.source_dim > 0 ? args.source_dim : args.dim;
  cfg.target_dim = args.target_dim > 0 ? args.target_dim : args.dim;
  cfg.seed = args.seed;

  ResolvedConfig config;
  config.set("command", "synth");
  config.set("n", static_cast<long long>(cfg.num_pairs));
  config.set("latent", static_cast<long long>(cfg.latent_dim));
  config.set("source_dim", static_cast<long long>(cfg.source_dim));
  config.set("target_dim", static_cast<long long>(cfg.target_dim));
  config.set("seed", static_cast<long long>(cfg.seed));
  config.set("train_fraction", args.train_fraction);
  config.set("split_seed", static_cast<long long>(args.split_seed));
  config.set("precision", static_cast<long long>(args.precision));

  const auto ds = zsl::generate_synthetic(cfg);

  std::vector<zsl::ManifestEntry> manifest;
  manifest.reserve(ds.ids.size());
  if (args.train_fraction > 0.0) {
    const auto parts = zsl::split(ds, args.train_fraction, args.split_seed);
    std::map<std::string, std::string> split_of;
    for (const auto& id : parts.train.ids) split_of[id] = "train";
    for (const auto& id : parts.test.ids) split_of[id] = "test";
    for (const auto& id : ds.ids) manifest.push_back({id, split_of.at(id)});
  } else {
    for (const auto& id : ds.ids) manifest.push_back({id, "all"});
  }

  namespace fs = std::filesystem;
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  const fs::path source_path =
      args.source_out.empty() ? dir / "source.vec" : fs::path(args.source_out);
  const fs::path target_path =
      args.target_out.empty() ? dir / "target.vec" : fs::path(args.target_out);
  const fs::path manifest_path = args.manifest_out.empty()
                                     ? dir / "manifest.tsv"
                                     : fs::path(args.manifest_out);

  zsl::save_embeddings(source_path, {ds.ids, ds.source}, args.precision);
  zsl::save_embeddings(target_path, {ds.ids, ds.target}, args.precision);
  zsl::save_manifest(manifest_path, manifest,
                     "config_digest: " + config.digest());
  std::cerr << "wrote " << source_path.string() << ", " << target_path.string()
            << ", " << manifest_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string source_path;
  std::string target_path;
  std::string manifest_path;
  std::string lexicon_path;
  double train_fraction = -1.0;
  std::uint64_t split_seed = 0;
  std::string methods = "ridge-xy,ridge-yx";
  bool add_nicdm = false;
  int nicdm_k = 10;
  double fixed_lambda = -1.0;  // <0: calibrate on the grid
  std::string lambda_grid = "1e-3,1e-2,1e-1,1,10,1e2,1e3";
  int folds = 5;
  std::uint64_t cv_seed = 0;
  std::string k_list = "1,10";
  bool macro_accuracy = false;
  bool no_dedup_lexicon = false;
  std::string out_path;
  std::string format = "tsv";
};

zsl::PairedDataset pair_from_manifest(const zsl::EmbeddingSet& source,
                                      const zsl::EmbeddingSet& target,
                                      const std::vector<zsl::ManifestEntry>& manifest) {
  std::map<std::string, int> source_of, target_of;
  for (std::size_t i = 0; i < source.ids.size(); ++i)
    source_of[source.ids[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < target.ids.size(); ++i)
    target_of[target.ids[i]] = static_cast<int>(i);

  zsl::PairedDataset ds;
  ds.source.resize(source.dim(), static_cast<Eigen::Index>(manifest.size()));
  ds.target.resize(target.dim(), static_cast<Eigen::Index>(manifest.size()));
  Eigen::Index col = 0;
  for (const auto& entry : manifest) {
    const auto s = source_of.find(entry.id);
    const auto t = target_of.find(entry.id);
    if (s == source_of.end())
      throw std::runtime_error("manifest id '" + entry.id +
                               "' missing from the source embeddings");
    if (t == target_of.end())
      throw std::runtime_error("manifest id '" + entry.id +
                               "' missing from the target embeddings");
    ds.source.col(col) = source.vectors.col(s->second);
    ds.target.col(col) = target.vectors.col(t->second);
    ds.ids.push_back(entry.id);
    ds.source_ids.push_back(entry.id);
    ds.target_ids.push_back(entry.id);
    ++col;
  }
  return ds;
}

std::string acc_column(int k) { return "Acc_" + std::to_string(k); }
std::string skew_column(int k) { return "N" + std::to_string(k) + "_skew"; }

std::string experiment_tsv(const std::vector<zsl::EvalReport>& reports,
                           const ResolvedConfig& config,
                           const std::vector<int>& ks) {
  std::ostringstream out;
  out << "# config_digest: " << config.digest() << '\n';
  out << "# config: " << config.line() << '\n';
  out << "method\tMAP";
  for (int k : ks) out << '\t' << acc_column(k);
  for (int k : ks) out << '\t' << skew_column(k);
  out << '\n';
  for (const auto& r : reports) {
    out << r.method_name << '\t' << zsl::format_number(r.map);
    for (int k : ks) out << '\t' << zsl::format_number(r.acc.at(k));
    for (int k : ks) out << '\t' << zsl::format_number(r.nk_skewness.at(k));
    out << '\n';
  }
  return out.str();
}

std::string experiment_json(const std::vector<zsl::EvalReport>& reports,
                            const ResolvedConfig& config,
                            const std::vector<int>& ks) {
  ordered_json j;
  j["config_digest"] = config.digest();
  j["config"] = config.to_json();
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json jr;
    jr["method"] = r.method_name;
    jr["MAP"] = zsl::round_tripped(r.map);
    for (int k : ks) jr[acc_column(k)] = zsl::round_tripped(r.acc.at(k));
    for (int k : ks)
      jr[skew_column(k)] = zsl::round_tripped(r.nk_skewness.at(k));
    jr["num_queries"] = r.num_queries;
    j["reports"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

int run_experiment_cmd(const ExperimentArgs& args) {
  if (args.manifest_path.empty() == args.lexicon_path.empty())
    throw std::runtime_error(
        "exactly one of --manifest and --lexicon is required");
  if (args.format != "tsv" && args.format != "json")
    throw std::runtime_error("--format must be tsv or json");

  const auto source = zsl::load_embeddings(args.source_path);
  const auto target = zsl::load_embeddings(args.target_path);

  zsl::PairedDataset train, test;
  int skipped_lexicon_entries = 0;
  if (!args.manifest_path.empty()) {
    const auto manifest = zsl::load_manifest(args.manifest_path);
    bool all_unsplit = true;
    for (const auto& e : manifest) {
      if (e.split == "train" || e.split == "test") {
        all_unsplit = false;
      } else if (e.split != "all") {
        throw std::runtime_error("manifest split '" + e.split +
                                 "' is not one of train/test/all");
      }
    }
    const auto ds = pair_from_manifest(source, target, manifest);
    if (all_unsplit) {
      if (args.train_fraction <= 0.0)
        throw std::runtime_error(
            "manifest has no train/test labels; pass --train-fraction");
      const auto parts = zsl::split(ds, args.train_fraction, args.split_seed);
      train = parts.train;
      test = parts.test;
    } else {
      std::vector<int> train_idx, test_idx;
      for (std::size_t i = 0; i < manifest.size(); ++i) {
        if (manifest[i].split == "train")
          train_idx.push_back(static_cast<int>(i));
        else if (manifest[i].split == "test")
          test_idx.push_back(static_cast<int>(i));
      }
      if (train_idx.empty() || test_idx.empty())
        throw std::runtime_error("manifest needs both train and test rows");
      train = zsl::select_pairs(ds, train_idx);
      test = zsl::select_pairs(ds, test_idx);
    }
  } else {
    const auto lexicon = zsl::load_lexicon(args.lexicon_path);
    const auto paired =
        zsl::pair_by_lexicon(source, target, lexicon, !args.no_dedup_lexicon);
    skipped_lexicon_entries = paired.skipped;
    if (paired.skipped > 0)
      std::cerr << "skipped " << paired.skipped
                << " lexicon entries with unknown tokens\n";
    if (args.train_fraction <= 0.0)
      throw std::runtime_error("--lexicon requires --train-fraction");
    const auto parts =
        zsl::split(paired.dataset, args.train_fraction, args.split_seed);
    train = parts.train;
    test = parts.test;
  }

  const auto ks = parse_int_list(args.k_list, "--k");

  std::vector<zsl::Direction> directions;
  {
    std::stringstream ss(args.methods);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "ridge-xy")
        directions.push_back(zsl::Direction::SourceToTarget);
      else if (item == "ridge-yx")
        directions.push_back(zsl::Direction::TargetToSource);
      else if (!item.empty())
        throw std::runtime_error("unknown method '" + item +
                                 "' (expected ridge-xy or ridge-yx)");
    }
  }
  if (directions.empty()) throw std::runtime_error("--methods is empty");

  ResolvedConfig config;
  config.set("command", "experiment");
  config.set("source", args.source_path);
  config.set("target", args.target_path);
  if (!args.manifest_path.empty()) config.set("manifest", args.manifest_path);
  if (!args.lexicon_path.empty()) {
    config.set("lexicon", args.lexicon_path);
    config.set("dedup_lexicon", args.no_dedup_lexicon ? "false" : "true");
    config.set("skipped_lexicon_entries",
               static_cast<long long>(skipped_lexicon_entries));
  }
  config.set("train_fraction", args.train_fraction);
  config.set("split_seed", static_cast<long long>(args.split_seed));
  config.set("methods", args.methods);
  config.set("nicdm", args.add_nicdm ? "true" : "false");
  config.set("nicdm_k", static_cast<long long>(args.nicdm_k));
  config.set("k_list", args.k_list);
  config.set("macro_acc", args.macro_accuracy ? "true" : "false");
  config.set("n_train", static_cast<long long>(train.size()));
  config.set("n_test", static_cast<long long>(test.size()));

  // one lambda per direction: fixed, or calibrated on the training pairs
  std::map<zsl::Direction, double> lambda_of;
  if (args.fixed_lambda >= 0.0) {
    for (auto d : directions) lambda_of[d] = args.fixed_lambda;
    config.set("lambda", args.fixed_lambda);
  } else {
    const auto grid = parse_double_list(args.lambda_grid, "--lambda-grid");
    config.set("lambda_grid", args.lambda_grid);
    config.set("folds", static_cast<long long>(args.folds));
    config.set("cv_seed", static_cast<long long>(args.cv_seed));
    for (auto d : directions) {
      const auto result =
          zsl::calibrate_lambda(train, d, grid, args.folds, args.cv_seed);
      lambda_of[d] = result.lambda;
      config.set(std::string("lambda.") +
                     (d == zsl::Direction::SourceToTarget ? "ridge-xy"
                                                          : "ridge-yx"),
                 result.lambda);
    }
  }

  zsl::ExperimentConfig experiment;
  experiment.k_list = ks;
  experiment.macro_accuracy = args.macro_accuracy;
  for (auto d : directions) {
    zsl::MethodSpec spec;
    spec.direction = d;
    spec.lambda = lambda_of.at(d);
    spec.nicdm_k = args.nicdm_k;
    experiment.methods.push_back(spec);
    if (args.add_nicdm) {
      spec.use_nicdm = true;
      experiment.methods.push_back(spec);
    }
  }

  const auto reports = zsl::run_experiment(train, test, experiment);
  const std::string text = args.format == "tsv"
                               ? experiment_tsv(reports, config, ks)
                               : experiment_json(reports, config, ks);
  write_text(args.out_path, text);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string gamma_grid = "0.5,1,2";
  std::string dim_grid = "10,100";
  std::string s2_grid = "0.5,1,2";
  int delta_samples = 100000;
  int variance_samples = 100000;
  int shrinkage_trials = 1000;
  int ball_trials = 10000;
  int two_config_seeds = 20;
  int two_config_queries = 1000;
  int two_config_targets = 1000;
  int two_config_dim = 300;
  int two_config_k = 10;
  std::uint64_t seed = 0;
  bool skip_two_config = false;
  bool inject_failure = false;  // test hook: corrupts the delta closed form
  std::string out_path;
  std::string format = "tsv";
};

struct VerifyRow {
  std::string check;
  std::string params;
  double observed = 0.0;
  double expected = 0.0;
  double margin = 0.0;  // >= 0 means the check passed
  bool passed = false;
};

std::string verify_tsv(const std::vector<VerifyRow>& rows,
                       const ResolvedConfig& config) {
  std::ostringstream out;
  out << "# config_digest: " << config.digest() << '\n';
  out << "# config: " << config.line() << '\n';
  out << "check\tparams\tobserved\texpected\tmargin\tstatus\n";
  for (const auto& r : rows) {
    out << r.check << '\t' << r.params << '\t' << zsl::format_number(r.observed)
        << '\t' << zsl::format_number(r.expected) << '\t'
        << zsl::format_number(r.margin) << '\t' << (r.passed ? "pass" : "fail")
        << '\n';
  }
  return out.str();
}

std::string verify_json(const std::vector<VerifyRow>& rows,
                        const ResolvedConfig& config, bool all_passed) {
  ordered_json j;
  j["config_digest"] = config.digest();
  j["config"] = config.to_json();
  j["passed"] = all_passed;
  j["checks"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json jr;
    jr["check"] = r.check;
    jr["params"] = r.params;
    jr["observed"] = zsl::round_tripped(r.observed);
    jr["expected"] = zsl::round_tripped(r.expected);
    jr["margin"] = zsl::round_tripped(r.margin);
    jr["status"] = r.passed ? "pass" : "fail";
    j["checks"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

int run_verify(const VerifyArgs& args) {
  if (args.format != "tsv" && args.format != "json")
    throw std::runtime_error("--format must be tsv or json");

  ResolvedConfig config;
  config.set("command", "verify");
  config.set("gamma_grid", args.gamma_grid);
  config.set("dim_grid", args.dim_grid);
  config.set("s2_grid", args.s2_grid);
  config.set("delta_samples", static_cast<long long>(args.delta_samples));
  config.set("variance_samples", static_cast<long long>(args.variance_samples));
  config.set("shrinkage_trials", static_cast<long long>(args.shrinkage_trials));
  config.set("ball_trials", static_cast<long long>(args.ball_trials));
  config.set("two_config_seeds", static_cast<long long>(args.two_config_seeds));
  config.set("seed", static_cast<long long>(args.seed));

  std::vector<VerifyRow> rows;

  // expected squared-distance gap vs. its closed form, over the grid
  const double corruption = args.inject_failure ? 1.5 : 1.0;
  for (double gamma : parse_double_list(args.gamma_grid, "--gamma-grid")) {
    for (int dim : parse_int_list(args.dim_grid, "--dim-grid")) {
      for (double s2 : parse_double_list(args.s2_grid, "--s2-grid")) {
        zsl::DeltaParams p;
        p.gamma = gamma;
        p.dim = dim;
        p.s2 = s2;
        p.num_samples = args.delta_samples;
        p.seed = args.seed;
        const auto mc = zsl::delta_monte_carlo(p);
        VerifyRow row;
        row.check = "delta-gap";
        row.params = "gamma=" + zsl::format_number(gamma) +
                     " dim=" + std::to_string(dim) +
                     " s2=" + zsl::format_number(s2);
        row.observed = mc.estimate;
        row.expected = corruption * zsl::delta_closed_form(gamma, dim, s2);
        row.margin = 3.0 * mc.std_error - std::abs(row.observed - row.expected);
        row.passed = row.margin >= 0.0;
        rows.push_back(row);
      }
    }
  }

  // variance of the squared norm vs. 2 d s^4, within 5%
  {
    const std::pair<int, double> cells[] = {{1, 1.0}, {10, 2.0}, {50, 1.0}};
    for (const auto& [dim, s2] : cells) {
      VerifyRow row;
      row.check = "squared-norm-variance";
      row.params = "dim=" + std::to_string(dim) + " s2=" + zsl::format_number(s2);
      row.observed = zsl::squared_norm_variance_mc(dim, s2, args.variance_samples,
                                                   args.seed + 1);
      row.expected = 2.0 * dim * s2 * s2;
      row.margin = 0.05 * row.expected - std::abs(row.observed - row.expected);
      row.passed = row.margin >= 0.0;
      rows.push_back(row);
    }
  }

  // spectral-norm shrinkage of fitted projections on random instances
  {
    const double lambdas[] = {0.0, 1e-3, 1.0, 1e3};
    zsl::Rng rng = zsl::Rng::derive(args.seed, 0x7665726966);
    double worst_ratio = 0.0;
    double worst_projection_dev = 0.0;
    int violations = 0;
    const int instances = std::max(1, args.shrinkage_trials / 4);
    for (int t = 0; t < instances; ++t) {
      const int c = rng.uniform_int(2, 30);
      const int d = rng.uniform_int(2, 30);
      const int n = rng.uniform_int(5, 100);
      const zsl::DataMatrix a = rng.normal_matrix(c, n);
      const zsl::DataMatrix b = rng.normal_matrix(d, n);
      const double sigma = zsl::spectral_norm(a);
      const double b_norm = zsl::spectral_norm(b);
      for (double lambda : lambdas) {
        const auto model = zsl::fit_ridge(a, b, lambda,
                                          {zsl::Direction::SourceToTarget, false});
        const double ratio = zsl::spectral_norm(model.projection * a) / b_norm;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 1.0 + 1e-10) ++violations;

        zsl::DataMatrix projected;
        if (lambda > 0.0) {
          zsl::DataMatrix gram = a * a.transpose();
          gram.diagonal().array() += lambda;
          projected = a.transpose() * gram.ldlt().solve(a);
        } else {
          projected = zsl::pseudo_inverse(a) * a;  // equals A^T (A A^T)^+ A
        }
        const double expected = sigma * sigma / (sigma * sigma + lambda);
        worst_projection_dev = std::max(
            worst_projection_dev,
            std::abs(zsl::spectral_norm(projected) - expected));
      }
    }
    VerifyRow shrink;
    shrink.check = "shrinkage";
    shrink.params = "trials=" + std::to_string(instances * 4);
    shrink.observed = worst_ratio;
    shrink.expected = 1.0;
    shrink.margin = 1.0 + 1e-10 - worst_ratio;
    shrink.passed = violations == 0;
    rows.push_back(shrink);

    VerifyRow proj;
    proj.check = "projection-norm";
    proj.params = shrink.params;
    proj.observed = worst_projection_dev;
    proj.expected = 0.0;
    proj.margin = 1e-8 - worst_projection_dev;
    proj.passed = proj.margin >= 0.0;
    rows.push_back(proj);
  }

  // nearest-anchor retention for the outer vs. inner probe
  {
    zsl::BallExperimentParams p;
    p.num_trials = args.ball_trials;
    p.seed = args.seed + 2;
    const auto r = zsl::ball_experiment(p);
    VerifyRow row;
    row.check = "ball-retention";
    row.params = "dim=2 dataset=100 radius=0.5 norms=0.5/2.5 trials=" +
                 std::to_string(p.num_trials);
    row.observed = r.p2 - r.p1;
    row.expected = 0.0;
    row.margin = row.observed - 2.0 * r.pooled_std_error;
    row.passed = row.margin >= 0.0;
    rows.push_back(row);
  }

  // paired-seed hubness comparison of the two variance assignments
  if (!args.skip_two_config) {
    double mean_narrow = 0.0;
    double mean_wide = 0.0;
    for (int s = 0; s < args.two_config_seeds; ++s) {
      zsl::TwoConfigParams p;
      p.dim = args.two_config_dim;
      p.num_queries = args.two_config_queries;
      p.num_targets = args.two_config_targets;
      p.k = args.two_config_k;
      p.seed = args.seed + 100 + static_cast<std::uint64_t>(s);
      const auto r = zsl::two_config_experiment(p);
      mean_narrow += r.skew_narrow_queries;
      mean_wide += r.skew_wide_queries;
    }
    mean_narrow /= args.two_config_seeds;
    mean_wide /= args.two_config_seeds;
    VerifyRow row;
    row.check = "two-config-skew";
    row.params = "dim=" + std::to_string(args.two_config_dim) +
                 " k=" + std::to_string(args.two_config_k) +
                 " seeds=" + std::to_string(args.two_config_seeds);
    row.observed = mean_wide;
    row.expected = mean_narrow;
    row.margin = mean_narrow - mean_wide;
    row.passed = mean_wide < mean_narrow;
    rows.push_back(row);
  }

  const bool all_passed =
      std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed; });
  const std::string text = args.format == "tsv"
                               ? verify_tsv(rows, config)
                               : verify_json(rows, config, all_passed);
  write_text(args.out_path, text);
  if (!all_passed) {
    std::cerr << "verification failed\n";
    return kExitVerificationFailure;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// hubness

struct HubnessArgs {
  std::string queries_path;
  std::string targets_path;
  std::string k_list = "1,10";
  bool use_nicdm = false;
  int nicdm_k = 10;
  std::string out_path;
  std::string counts_out;
  std::string format = "tsv";
};

int run_hubness(const HubnessArgs& args) {
  if (args.format != "tsv" && args.format != "json")
    throw std::runtime_error("--format must be tsv or json");
  const auto queries = zsl::load_embeddings(args.queries_path);
  const auto targets = zsl::load_embeddings(args.targets_path);
  const auto ks = parse_int_list(args.k_list, "--k");
  for (int k : ks)
    if (k < 1 || k > targets.size())
      throw std::runtime_error("--k value " + std::to_string(k) +
                               " out of range for " +
                               std::to_string(targets.size()) + " targets");

  ResolvedConfig config;
  config.set("command", "hubness");
  config.set("queries", args.queries_path);
  config.set("targets", args.targets_path);
  config.set("k_list", args.k_list);
  config.set("nicdm", args.use_nicdm ? "true" : "false");
  config.set("nicdm_k", static_cast<long long>(args.nicdm_k));
  config.set("num_queries", static_cast<long long>(queries.size()));
  config.set("num_targets", static_cast<long long>(targets.size()));

  auto dist = zsl::pairwise_euclidean(queries.vectors, targets.vectors);
  if (args.use_nicdm) dist = zsl::nicdm(dist, args.nicdm_k);
  const auto rankings = zsl::rank_all(dist);

  std::vector<zsl::HubnessReport> reports;
  for (int k : ks)
    reports.push_back(
        zsl::hubness_report(rankings, k, static_cast<int>(targets.size())));

  std::string text;
  if (args.format == "tsv") {
    std::ostringstream out;
    out << "# config_digest: " << config.digest() << '\n';
    out << "# config: " << config.line() << '\n';
    out << "k\tskewness\tnum_queries\tnum_targets\n";
    for (const auto& r : reports)
      out << r.k << '\t' << zsl::format_number(r.skewness) << '\t'
          << r.num_queries << '\t' << targets.size() << '\n';
    text = out.str();
  } else {
    ordered_json j;
    j["config_digest"] = config.digest();
    j["config"] = config.to_json();
    j["results"] = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json jr;
      jr["k"] = r.k;
      jr["skewness"] = zsl::round_tripped(r.skewness);
      jr["num_queries"] = r.num_queries;
      jr["num_targets"] = targets.size();
      j["results"].push_back(std::move(jr));
    }
    text = j.dump(2) + "\n";
  }
  write_text(args.out_path, text);

  if (!args.counts_out.empty()) {
    std::ostringstream out;
    out << "# config_digest: " << config.digest() << '\n';
    out << "target_id";
    for (const auto& r : reports) out << "\tN_" << r.k;
    out << '\n';
    for (Eigen::Index t = 0; t < targets.size(); ++t) {
      out << targets.ids[static_cast<std::size_t>(t)];
      for (const auto& r : reports)
        out << '\t' << r.counts[static_cast<std::size_t>(t)];
      out << '\n';
    }
    write_text(args.counts_out, out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regression-based zero-shot mapping with hubness diagnostics"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic paired dataset");
  synth_cmd->add_option("--n", synth.n, "number of pairs")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--latent", synth.latent, "latent dimension");
  synth_cmd->add_option("--dim", synth.dim, "source and target dimension");
  synth_cmd->add_option("--source-dim", synth.source_dim, "override source dimension");
  synth_cmd->add_option("--target-dim", synth.target_dim, "override target dimension");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");
  synth_cmd->add_option("--train-fraction", synth.train_fraction,
                        "write train/test split labels into the manifest");
  synth_cmd->add_option("--split-seed", synth.split_seed, "split seed");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory");
  synth_cmd->add_option("--source-out", synth.source_out, "source embeddings path");
  synth_cmd->add_option("--target-out", synth.target_out, "target embeddings path");
  synth_cmd->add_option("--manifest-out", synth.manifest_out, "manifest path");
  synth_cmd->add_option("--precision", synth.precision,
                        "significant digits in embedding files");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "fit, rank, and score the compared mapping directions");
  exp_cmd->add_option("--source", exp.source_path, "source embeddings")->required();
  exp_cmd->add_option("--target", exp.target_path, "target embeddings")->required();
  exp_cmd->add_option("--manifest", exp.manifest_path, "id/split manifest");
  exp_cmd->add_option("--lexicon", exp.lexicon_path, "gold pair lexicon");
  exp_cmd->add_option("--train-fraction", exp.train_fraction,
                      "train fraction when the input is unsplit");
  exp_cmd->add_option("--split-seed", exp.split_seed, "split seed");
  exp_cmd->add_option("--methods", exp.methods, "comma list: ridge-xy,ridge-yx");
  exp_cmd->add_flag("--nicdm", exp.add_nicdm, "also score each method with NICDM");
  exp_cmd->add_option("--nicdm-k", exp.nicdm_k, "NICDM neighborhood size");
  exp_cmd->add_option("--lambda", exp.fixed_lambda, "fixed ridge parameter");
  exp_cmd->add_option("--lambda-grid", exp.lambda_grid,
                      "grid for cross-validated calibration");
  exp_cmd->add_option("--folds", exp.folds, "cross-validation folds");
  exp_cmd->add_option("--cv-seed", exp.cv_seed, "cross-validation fold seed");
  exp_cmd->add_option("--k", exp.k_list, "accuracy/skewness cutoffs");
  exp_cmd->add_flag("--macro-acc", exp.macro_accuracy,
                    "macro-average accuracy over gold targets");
  exp_cmd->add_flag("--no-dedup-lexicon", exp.no_dedup_lexicon,
                    "keep duplicate lexicon entries as duplicate pairs");
  exp_cmd->add_option("--out", exp.out_path, "report path (default stdout)");
  exp_cmd->add_option("--format", exp.format, "tsv or json");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Monte Carlo checks of the distance and shrinkage properties");
  verify_cmd->add_option("--gamma-grid", verify.gamma_grid, "gap factors");
  verify_cmd->add_option("--dim-grid", verify.dim_grid, "dimensions");
  verify_cmd->add_option("--s2-grid", verify.s2_grid, "component variances");
  verify_cmd->add_option("--delta-samples", verify.delta_samples,
                         "samples per delta cell");
  verify_cmd->add_option("--variance-samples", verify.variance_samples,
                         "samples per variance cell");
  verify_cmd->add_option("--shrinkage-trials", verify.shrinkage_trials,
                         "random shrinkage instances (spread over lambdas)");
  verify_cmd->add_option("--ball-trials", verify.ball_trials,
                         "trials per probe norm");
  verify_cmd->add_option("--two-config-seeds", verify.two_config_seeds,
                         "paired seeds for the variance-swap comparison");
  verify_cmd->add_option("--two-config-queries", verify.two_config_queries,
                         "queries per run");
  verify_cmd->add_option("--two-config-targets", verify.two_config_targets,
                         "targets per run");
  verify_cmd->add_option("--two-config-dim", verify.two_config_dim,
                         "dimension of the comparison space");
  verify_cmd->add_option("--two-config-k", verify.two_config_k,
                         "neighborhood size for the occurrence counts");
  verify_cmd->add_flag("--skip-two-config", verify.skip_two_config,
                       "skip the slowest check");
  verify_cmd->add_option("--seed", verify.seed, "base seed");
  verify_cmd->add_option("--out", verify.out_path, "report path (default stdout)");
  verify_cmd->add_option("--format", verify.format, "tsv or json");
  verify_cmd->add_flag("--inject-failure", verify.inject_failure, "")
      ->group("");  // test hook, hidden from help

  HubnessArgs hub;
  auto* hub_cmd = app.add_subcommand(
      "hubness", "k-occurrence counts and skewness for query/target files");
  hub_cmd->add_option("--queries", hub.queries_path, "query embeddings")->required();
  hub_cmd->add_option("--targets", hub.targets_path, "target embeddings")->required();
  hub_cmd->add_option("--k", hub.k_list, "comma list of k values");
  hub_cmd->add_flag("--nicdm", hub.use_nicdm, "apply NICDM before ranking");
  hub_cmd->add_option("--nicdm-k", hub.nicdm_k, "NICDM neighborhood size");
  hub_cmd->add_option("--out", hub.out_path, "report path (default stdout)");
  hub_cmd->add_option("--counts-out", hub.counts_out, "per-target counts path");
  hub_cmd->add_option("--format", hub.format, "tsv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (exp_cmd->parsed()) return run_experiment_cmd(exp);
    if (verify_cmd->parsed()) return run_verify(verify);
    if (hub_cmd->parsed()) return run_hubness(hub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

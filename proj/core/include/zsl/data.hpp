#pragma once

#include "zsl/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace zsl {

/// Column-aligned source/target pairs: column j of `source` and `target`
/// describe the same pair. `ids` are unique per pair; `source_ids` and
/// `target_ids` carry the underlying object tokens (equal to `ids` for
/// synthetic data, lexicon tokens for paired embeddings).
struct PairedDataset {
  DataMatrix source;  // c x n
  DataMatrix target;  // d x n
  std::vector<std::string> ids;
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;

  Eigen::Index size() const { return source.cols(); }
};

/// Latent-variable pair generator: n latent standard-normal vectors are
/// pushed through two independent random projections with entries uniform on
/// [-1, 1], one per space, so the two views share geometry without being
/// identical.
struct SyntheticConfig {
  int num_pairs = 2000;
  int latent_dim = 1000;
  int source_dim = 100;  // must be <= latent_dim
  int target_dim = 100;  // must be <= latent_dim
  std::uint64_t seed = 0;
};

/// When latent_out is non-null it receives the latent matrix (latent_dim x
/// num_pairs) the two views were projected from.
PairedDataset generate_synthetic(const SyntheticConfig& cfg,
                                 DataMatrix* latent_out = nullptr);

/// Copy of the pairs at the given column indices, in the given order.
PairedDataset select_pairs(const PairedDataset& ds,
                           const std::vector<int>& indices);

struct SplitResult {
  PairedDataset train;
  PairedDataset test;
};

/// Disjoint column partition with floor(train_fraction * n) training pairs
/// when target tokens are unique. Pairs sharing a target token always land
/// on the same side, so no test target identity ever occurs in training;
/// with shared targets the training side may exceed the floor by at most one
/// group. Deterministic per seed.
SplitResult split(const PairedDataset& ds, double train_fraction,
                  std::uint64_t seed);

struct EmbeddingSet {
  std::vector<std::string> ids;
  DataMatrix vectors;  // dim x n, one column per token

  Eigen::Index dim() const { return vectors.rows(); }
  Eigen::Index size() const { return vectors.cols(); }
};

/// Text embeddings, one object per line: token followed by whitespace-
/// separated decimals. A first line with exactly two integer fields is
/// treated as an "N D" header. Ragged rows, duplicate tokens, non-numeric
/// fields, and (when expected_dim >= 0) dimension mismatches are errors that
/// name the offending line.
EmbeddingSet load_embeddings(const std::filesystem::path& path,
                             int expected_dim = -1);

void save_embeddings(const std::filesystem::path& path, const EmbeddingSet& set,
                     int precision = 9);

using Lexicon = std::vector<std::pair<std::string, std::string>>;

/// Two whitespace-separated tokens per line; '#' lines are comments.
Lexicon load_lexicon(const std::filesystem::path& path);

struct PairingResult {
  PairedDataset dataset;
  int skipped = 0;  // lexicon entries whose tokens were missing on either side
};

/// One aligned column pair per resolvable lexicon entry. A source token with
/// several gold targets yields several pairs. With deduplicate (default),
/// repeated lexicon entries produce a single pair.
PairingResult pair_by_lexicon(const EmbeddingSet& source,
                              const EmbeddingSet& target, const Lexicon& lexicon,
                              bool deduplicate = true);

/// R * m for a fresh out_dim x rows(m) matrix R with entries uniform on
/// [-1, 1], deterministic per seed.
DataMatrix random_project(const DataMatrix& m, int out_dim, std::uint64_t seed);

/// The projection application step of random_project, for arbitrary R.
DataMatrix apply_projection(const DataMatrix& m, const DataMatrix& projection);

struct ManifestEntry {
  std::string id;
  std::string split;  // "train", "test", or "all"
};

/// Tab-separated (id, split) records; '#' lines are comments.
void save_manifest(const std::filesystem::path& path,
                   const std::vector<ManifestEntry>& entries,
                   const std::string& header_comment = "");
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace zsl

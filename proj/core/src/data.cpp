#include "zsl/data.hpp"

#include "zsl/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace zsl {

namespace {

std::vector<std::string> split_fields(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(std::move(field));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_positive_int(const std::string& s, long& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && out >= 0;
}

[[noreturn]] void fail_at_line(const std::filesystem::path& path, long line,
                               const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                           what);
}

}  // namespace

PairedDataset select_pairs(const PairedDataset& ds,
                           const std::vector<int>& indices) {
  PairedDataset out;
  out.source.resize(ds.source.rows(), static_cast<Eigen::Index>(indices.size()));
  out.target.resize(ds.target.rows(), static_cast<Eigen::Index>(indices.size()));
  out.ids.reserve(indices.size());
  out.source_ids.reserve(indices.size());
  out.target_ids.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int i = indices[j];
    if (i < 0 || i >= static_cast<int>(ds.size()))
      throw std::invalid_argument("select_pairs: index out of range");
    out.source.col(static_cast<Eigen::Index>(j)) = ds.source.col(i);
    out.target.col(static_cast<Eigen::Index>(j)) = ds.target.col(i);
    out.ids.push_back(ds.ids[static_cast<std::size_t>(i)]);
    out.source_ids.push_back(ds.source_ids[static_cast<std::size_t>(i)]);
    out.target_ids.push_back(ds.target_ids[static_cast<std::size_t>(i)]);
  }
  return out;
}

PairedDataset generate_synthetic(const SyntheticConfig& cfg,
                                 DataMatrix* latent_out) {
  if (cfg.num_pairs < 1 || cfg.latent_dim < 1)
    throw std::invalid_argument("generate_synthetic: sizes must be positive");
  if (cfg.source_dim < 1 || cfg.source_dim > cfg.latent_dim ||
      cfg.target_dim < 1 || cfg.target_dim > cfg.latent_dim)
    throw std::invalid_argument(
        "generate_synthetic: projection dimensions must lie in [1, latent_dim]");

  Rng latent_rng = Rng::derive(cfg.seed, 0);
  Rng source_rng = Rng::derive(cfg.seed, 1);
  Rng target_rng = Rng::derive(cfg.seed, 2);

  const Eigen::MatrixXd latent =
      latent_rng.normal_matrix(cfg.latent_dim, cfg.num_pairs);
  const Eigen::MatrixXd source_proj =
      source_rng.uniform_matrix(cfg.source_dim, cfg.latent_dim, -1.0, 1.0);
  const Eigen::MatrixXd target_proj =
      target_rng.uniform_matrix(cfg.target_dim, cfg.latent_dim, -1.0, 1.0);

  PairedDataset ds;
  ds.source = source_proj * latent;
  ds.target = target_proj * latent;
  ds.ids.reserve(cfg.num_pairs);
  char buf[24];
  for (int i = 0; i < cfg.num_pairs; ++i) {
    std::snprintf(buf, sizeof(buf), "obj%06d", i);
    ds.ids.emplace_back(buf);
  }
  ds.source_ids = ds.ids;
  ds.target_ids = ds.ids;
  if (latent_out) *latent_out = latent;
  return ds;
}

SplitResult split(const PairedDataset& ds, double train_fraction,
                  std::uint64_t seed) {
  const int n = static_cast<int>(ds.size());
  if (n < 2) throw std::invalid_argument("split: need at least 2 pairs");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  const int num_train = static_cast<int>(train_fraction * n);
  if (num_train < 1 || num_train >= n)
    throw std::invalid_argument("split: fraction leaves one side empty");

  // pairs that share a target token stay together, keeping test target
  // identities unseen during training
  std::unordered_map<std::string, int> group_of;
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    const auto [it, fresh] =
        group_of.emplace(ds.target_ids[static_cast<std::size_t>(i)],
                         static_cast<int>(groups.size()));
    if (fresh) groups.emplace_back();
    groups[static_cast<std::size_t>(it->second)].push_back(i);
  }
  if (groups.size() < 2)
    throw std::invalid_argument(
        "split: every pair shares one target token; no disjoint split exists");

  std::vector<int> group_order(groups.size());
  std::iota(group_order.begin(), group_order.end(), 0);
  Rng rng = Rng::derive(seed, 0x73706c69);
  for (int i = static_cast<int>(group_order.size()) - 1; i > 0; --i)
    std::swap(group_order[static_cast<std::size_t>(i)],
              group_order[static_cast<std::size_t>(rng.uniform_int(0, i))]);

  std::vector<int> train_idx, test_idx;
  for (int g : group_order) {
    auto& side = static_cast<int>(train_idx.size()) < num_train ? train_idx
                                                                : test_idx;
    for (int i : groups[static_cast<std::size_t>(g)]) side.push_back(i);
  }
  if (train_idx.empty() || test_idx.empty())
    throw std::invalid_argument("split: a side ended up empty");
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  SplitResult result{select_pairs(ds, train_idx), select_pairs(ds, test_idx)};
  std::unordered_set<std::string> train_targets(result.train.target_ids.begin(),
                                                result.train.target_ids.end());
  for (const auto& t : result.test.target_ids)
    if (train_targets.count(t))
      throw std::logic_error("split: test target '" + t + "' leaked into training");
  return result;
}

EmbeddingSet load_embeddings(const std::filesystem::path& path,
                             int expected_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  EmbeddingSet set;
  std::vector<std::vector<double>> rows;
  std::unordered_set<std::string> seen;
  std::string line;
  long line_no = 0;
  long dim = -1;
  long declared_count = -1;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (first_content_line && fields.size() == 2) {
      long n = 0, d = 0;
      if (parse_positive_int(fields[0], n) && parse_positive_int(fields[1], d)) {
        declared_count = n;
        dim = d;
        first_content_line = false;
        continue;
      }
    }
    first_content_line = false;

    if (fields.size() < 2)
      fail_at_line(path, line_no, "expected a token and at least one value");
    const long row_dim = static_cast<long>(fields.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim)
      fail_at_line(path, line_no,
                   "ragged row: has " + std::to_string(row_dim) +
                       " values, expected " + std::to_string(dim));
    if (!seen.insert(fields[0]).second)
      fail_at_line(path, line_no, "duplicate token '" + fields[0] + "'");

    std::vector<double> values(row_dim);
    for (long i = 0; i < row_dim; ++i)
      if (!parse_double(fields[static_cast<std::size_t>(i) + 1], values[i]))
        fail_at_line(path, line_no,
                     "non-numeric field '" + fields[static_cast<std::size_t>(i) + 1] + "'");
    set.ids.push_back(fields[0]);
    rows.push_back(std::move(values));
  }

  if (rows.empty()) throw std::runtime_error(path.string() + ": no embeddings");
  if (declared_count >= 0 && declared_count != static_cast<long>(rows.size()))
    throw std::runtime_error(path.string() + ": header declares " +
                             std::to_string(declared_count) + " rows but " +
                             std::to_string(rows.size()) + " were found");
  if (expected_dim >= 0 && dim != expected_dim)
    throw std::runtime_error(path.string() + ": dimension " +
                             std::to_string(dim) + " does not match expected " +
                             std::to_string(expected_dim));

  set.vectors.resize(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (long i = 0; i < dim; ++i)
      set.vectors(i, static_cast<Eigen::Index>(j)) = rows[j][static_cast<std::size_t>(i)];
  require_finite(set.vectors, path.string());
  return set;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingSet& set,
                     int precision) {
  if (set.size() != static_cast<Eigen::Index>(set.ids.size()))
    throw std::invalid_argument("save_embeddings: ids do not match columns");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[64];
  for (Eigen::Index j = 0; j < set.size(); ++j) {
    out << set.ids[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < set.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.*g", precision, set.vectors(i, j));
      out << ' ' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Lexicon lex;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      fail_at_line(path, line_no, "expected exactly two tokens");
    lex.emplace_back(fields[0], fields[1]);
  }
  return lex;
}

PairingResult pair_by_lexicon(const EmbeddingSet& source,
                              const EmbeddingSet& target, const Lexicon& lexicon,
                              bool deduplicate) {
  std::unordered_map<std::string, int> source_index;
  std::unordered_map<std::string, int> target_index;
  for (std::size_t i = 0; i < source.ids.size(); ++i)
    source_index.emplace(source.ids[i], static_cast<int>(i));
  for (std::size_t i = 0; i < target.ids.size(); ++i)
    target_index.emplace(target.ids[i], static_cast<int>(i));

  std::set<std::pair<std::string, std::string>> used;
  std::vector<std::pair<int, int>> columns;
  std::vector<std::pair<std::string, std::string>> tokens;
  int skipped = 0;
  for (const auto& [src_token, tgt_token] : lexicon) {
    const auto s = source_index.find(src_token);
    const auto t = target_index.find(tgt_token);
    if (s == source_index.end() || t == target_index.end()) {
      ++skipped;
      continue;
    }
    if (deduplicate && !used.emplace(src_token, tgt_token).second) continue;
    columns.emplace_back(s->second, t->second);
    tokens.emplace_back(src_token, tgt_token);
  }
  if (columns.empty())
    throw std::runtime_error("pair_by_lexicon: no lexicon entry was resolvable");

  PairingResult result;
  result.skipped = skipped;
  PairedDataset& ds = result.dataset;
  const auto n = static_cast<Eigen::Index>(columns.size());
  ds.source.resize(source.dim(), n);
  ds.target.resize(target.dim(), n);
  std::unordered_map<std::string, int> id_uses;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto [si, ti] = columns[static_cast<std::size_t>(j)];
    ds.source.col(j) = source.vectors.col(si);
    ds.target.col(j) = target.vectors.col(ti);
    const auto& [src_token, tgt_token] = tokens[static_cast<std::size_t>(j)];
    std::string id = src_token + "|" + tgt_token;
    const int uses = ++id_uses[id];
    if (uses > 1) id += "#" + std::to_string(uses);
    ds.ids.push_back(std::move(id));
    ds.source_ids.push_back(src_token);
    ds.target_ids.push_back(tgt_token);
  }
  return result;
}

DataMatrix apply_projection(const DataMatrix& m, const DataMatrix& projection) {
  if (projection.cols() != m.rows())
    throw std::invalid_argument("apply_projection: dimension mismatch");
  return projection * m;
}

DataMatrix random_project(const DataMatrix& m, int out_dim, std::uint64_t seed) {
  if (out_dim < 1 || out_dim > m.rows())
    throw std::invalid_argument(
        "random_project: out_dim must lie in [1, input dimension]");
  Rng rng = Rng::derive(seed, 0x70726f6a);
  return apply_projection(m, rng.uniform_matrix(out_dim, m.rows(), -1.0, 1.0));
}

void save_manifest(const std::filesystem::path& path,
                   const std::vector<ManifestEntry>& entries,
                   const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (const auto& e : entries) out << e.id << '\t' << e.split << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2)
      fail_at_line(path, line_no, "expected 'id<TAB>split'");
    entries.push_back(ManifestEntry{fields[0], fields[1]});
  }
  if (entries.empty())
    throw std::runtime_error(path.string() + ": empty manifest");
  return entries;
}

}  // namespace zsl

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bmctx/rbm.hpp"

namespace bmctx {

/// Object-label to visible-index mapping. Labels are unique and kept in
/// lexicographic order so index assignment is reproducible across machines.
class Vocabulary {
 public:
  Vocabulary() = default;
  static Vocabulary from_labels(const std::set<std::string>& labels);

  Eigen::Index size() const { return static_cast<Eigen::Index>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Eigen::Index i) const { return labels_.at(static_cast<std::size_t>(i)); }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }
  Eigen::Index index_of(const std::string& label) const;  // throws naming the label

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Eigen::Index> index_;
};

struct SceneRecord {
  std::string scene_id;
  std::set<std::string> labels;  // non-empty; duplicate mentions collapse
  std::string context_id;        // ground truth when known, else empty
};

struct Corpus {
  Vocabulary vocab;
  std::vector<SceneRecord> records;
};

// Corpus file: one scene per line, tab-separated fields
//   scene_id <TAB> context_id (may be empty) <TAB> comma-separated labels
// with '#' comment lines and blank lines skipped.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Binary presence vector over the vocabulary; unknown labels are an error.
SceneVector encode(const SceneRecord& record, const Vocabulary& vocab);

/// Label set of the positions set in a binary scene vector.
std::set<std::string> decode(const SceneVector& scene, const Vocabulary& vocab);

/// Planted-context generator: K disjoint per-context label pools plus an
/// optional shared pool; contexts assigned round-robin, stream order shuffled.
/// Within a pool, labels are drawn rank-weighted (weight 1/(1+rank)), so each
/// context has common anchor objects and rare ones.
struct SyntheticSpec {
  int contexts = 8;
  int scenes_per_context = 200;
  int vocab_per_context = 10;
  int shared_vocab = 0;
  int objects_per_scene_min = 5;
  int objects_per_scene_max = 10;
  double noise_label_prob = 0.0;  // per-slot chance of drawing from the full vocabulary
  std::uint64_t seed = 0;
};

Corpus generate_synthetic(const SyntheticSpec& spec);

struct SplitResult {
  std::vector<SceneRecord> train;
  std::vector<SceneRecord> test;
};

/// Seeded shuffle, then split at round(train_fraction * n), clamped so both
/// halves are non-empty.
SplitResult split(const std::vector<SceneRecord>& records, double train_fraction,
                  std::uint64_t seed);

}  // namespace bmctx

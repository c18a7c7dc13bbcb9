#include "bmctx/data.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bmctx/random.hpp"

namespace bmctx {

namespace {

void check_label_charset(const std::string& label) {
  if (label.empty()) {
    throw std::runtime_error("empty object label");
  }
  if (label.find_first_of(",\t\n\r") != std::string::npos) {
    throw std::runtime_error("object label '" + label + "' contains a reserved character");
  }
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

int digits_for(int max_value) {
  int d = 1;
  while (max_value >= 10) {
    max_value /= 10;
    ++d;
  }
  return d;
}

}  // namespace

Vocabulary Vocabulary::from_labels(const std::set<std::string>& labels) {
  if (labels.empty()) {
    throw std::invalid_argument("vocabulary must contain at least one label");
  }
  Vocabulary v;
  v.labels_.assign(labels.begin(), labels.end());  // std::set is already sorted
  for (std::size_t i = 0; i < v.labels_.size(); ++i) {
    v.index_.emplace(v.labels_[i], static_cast<Eigen::Index>(i));
  }
  return v;
}

Eigen::Index Vocabulary::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw std::invalid_argument("unknown object label '" + label + "'");
  }
  return it->second;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file " + path.string());
  }

  std::vector<SceneRecord> records;
  std::set<std::string> vocab_labels;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;

  auto malformed = [&](const std::string& why) {
    return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const std::vector<std::string> fields = split_on(line, '\t');
    if (fields.size() != 3) {
      throw malformed("expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    SceneRecord rec;
    rec.scene_id = fields[0];
    rec.context_id = fields[1];
    if (rec.scene_id.empty()) throw malformed("empty scene id");
    if (!seen_ids.insert(rec.scene_id).second) {
      throw malformed("duplicate scene id '" + rec.scene_id + "'");
    }
    for (const std::string& label : split_on(fields[2], ',')) {
      if (label.empty()) throw malformed("empty label in list");
      rec.labels.insert(label);
      vocab_labels.insert(label);
    }
    if (rec.labels.empty()) throw malformed("scene has no labels");
    records.push_back(std::move(rec));
  }

  if (records.empty()) {
    throw std::runtime_error("corpus file " + path.string() + " contains no scenes");
  }
  return {Vocabulary::from_labels(vocab_labels), std::move(records)};
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write corpus file " + path.string());
  }
  for (const SceneRecord& rec : corpus.records) {
    if (rec.scene_id.empty() || rec.scene_id.find('\t') != std::string::npos) {
      throw std::runtime_error("scene id '" + rec.scene_id + "' is not writable");
    }
    out << rec.scene_id << '\t' << rec.context_id << '\t';
    bool first = true;
    for (const std::string& label : rec.labels) {
      check_label_charset(label);
      if (!first) out << ',';
      out << label;
      first = false;
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing corpus file " + path.string());
  }
}

SceneVector encode(const SceneRecord& record, const Vocabulary& vocab) {
  if (record.labels.empty()) {
    throw std::invalid_argument("scene '" + record.scene_id + "' has no labels");
  }
  SceneVector v = SceneVector::Zero(vocab.size());
  for (const std::string& label : record.labels) {
    v[vocab.index_of(label)] = 1.0;
  }
  return v;
}

std::set<std::string> decode(const SceneVector& scene, const Vocabulary& vocab) {
  if (scene.size() != vocab.size()) {
    throw std::invalid_argument("scene vector length does not match the vocabulary");
  }
  std::set<std::string> labels;
  for (Eigen::Index i = 0; i < scene.size(); ++i) {
    if (scene[i] != 0.0) labels.insert(vocab.label(i));
  }
  return labels;
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.contexts < 1) throw std::invalid_argument("synthetic spec needs contexts >= 1");
  if (spec.scenes_per_context < 0 || spec.vocab_per_context < 1 || spec.shared_vocab < 0) {
    throw std::invalid_argument("synthetic spec counts out of range");
  }
  if (spec.noise_label_prob < 0.0 || spec.noise_label_prob > 1.0) {
    throw std::invalid_argument("noise_label_prob must be in [0,1]");
  }
  if (spec.objects_per_scene_min < 1 || spec.objects_per_scene_max < spec.objects_per_scene_min) {
    throw std::invalid_argument("objects_per_scene range is invalid");
  }
  if (spec.objects_per_scene_max > spec.vocab_per_context + spec.shared_vocab) {
    throw std::invalid_argument("objects_per_scene exceeds the labels available to one context");
  }

  const int ctx_digits = digits_for(spec.contexts - 1);
  const int obj_digits = digits_for(spec.vocab_per_context - 1);

  std::vector<std::vector<std::string>> context_pools(spec.contexts);
  std::set<std::string> all_labels;
  for (int k = 0; k < spec.contexts; ++k) {
    for (int i = 0; i < spec.vocab_per_context; ++i) {
      std::string label = "c" + zero_pad(k, ctx_digits) + "_obj" + zero_pad(i, obj_digits);
      context_pools[k].push_back(label);
      all_labels.insert(std::move(label));
    }
  }
  std::vector<std::string> shared_pool;
  const int shared_digits = spec.shared_vocab > 0 ? digits_for(spec.shared_vocab - 1) : 1;
  for (int i = 0; i < spec.shared_vocab; ++i) {
    std::string label = "shared_" + zero_pad(i, shared_digits);
    shared_pool.push_back(label);
    all_labels.insert(std::move(label));
  }
  std::vector<std::string> full_pool(all_labels.begin(), all_labels.end());

  std::mt19937_64 rng(spec.seed);
  std::vector<SceneRecord> records;
  const long total = static_cast<long>(spec.contexts) * spec.scenes_per_context;
  records.reserve(static_cast<std::size_t>(total));

  for (long s = 0; s < total; ++s) {
    const int k = static_cast<int>(s % spec.contexts);  // round-robin context assignment
    SceneRecord rec;
    rec.context_id = "c" + zero_pad(k, ctx_digits);

    std::vector<std::string> own_pool = context_pools[static_cast<std::size_t>(k)];
    own_pool.insert(own_pool.end(), shared_pool.begin(), shared_pool.end());

    const int span = spec.objects_per_scene_max - spec.objects_per_scene_min + 1;
    const int n_objects = spec.objects_per_scene_min +
                          static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(span)));
    for (int slot = 0; slot < n_objects; ++slot) {
      const bool noisy = spec.noise_label_prob > 0.0 && uniform_unit(rng) < spec.noise_label_prob;
      const std::vector<std::string>& pool = noisy ? full_pool : own_pool;
      std::vector<std::size_t> remaining;
      remaining.reserve(pool.size());
      double weight_total = 0.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (rec.labels.count(pool[i])) continue;
        remaining.push_back(i);
        weight_total += 1.0 / static_cast<double>(1 + i);
      }
      if (remaining.empty()) continue;  // noise slot may find its pool exhausted
      // rank-weighted draw: low-rank labels are common, high-rank ones rare,
      // mirroring real object-frequency skew
      double x = uniform_unit(rng) * weight_total;
      std::size_t chosen = remaining.back();
      for (std::size_t i : remaining) {
        x -= 1.0 / static_cast<double>(1 + i);
        if (x <= 0.0) {
          chosen = i;
          break;
        }
      }
      rec.labels.insert(pool[chosen]);
    }
    records.push_back(std::move(rec));
  }

  shuffle(records, rng);
  const int id_digits = digits_for(total > 0 ? static_cast<int>(total - 1) : 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].scene_id = "s" + zero_pad(static_cast<int>(i), id_digits);
  }

  return {Vocabulary::from_labels(all_labels), std::move(records)};
}

SplitResult split(const std::vector<SceneRecord>& records, double train_fraction,
                  std::uint64_t seed) {
  if (records.size() < 2) {
    throw std::invalid_argument("split needs at least two records");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie strictly between 0 and 1");
  }
  std::vector<SceneRecord> shuffled = records;
  std::mt19937_64 rng(seed);
  shuffle(shuffled, rng);

  const auto n = static_cast<long>(shuffled.size());
  long n_train = std::llround(train_fraction * static_cast<double>(n));
  n_train = std::max(1L, std::min(n - 1, n_train));

  SplitResult result;
  result.train.assign(shuffled.begin(), shuffled.begin() + n_train);
  result.test.assign(shuffled.begin() + n_train, shuffled.end());
  return result;
}

}  // namespace bmctx

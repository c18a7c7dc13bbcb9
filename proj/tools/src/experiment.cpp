#include "bmctx/cli/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bmctx/data.hpp"
#include "bmctx/metrics.hpp"
#include "bmctx/model.hpp"
#include "bmctx/model_io.hpp"

namespace bmctx::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

ModelOptions model_options(const ExperimentConfig& cfg) {
  ModelOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.patience_neuron = cfg.patience_neuron;
  opts.patience_layer = cfg.patience_layer;
  opts.sample_hidden = cfg.sample_hidden;
  opts.simplified_confidence = cfg.simplified_confidence;
  opts.layer_baseline_settle = cfg.layer_baseline_settle;
  return opts;
}

SyntheticSpec synth_spec(const ExperimentConfig& cfg) {
  SyntheticSpec spec;
  spec.contexts = cfg.synth_contexts;
  spec.scenes_per_context = cfg.synth_scenes_per_context;
  spec.vocab_per_context = cfg.synth_vocab_per_context;
  spec.shared_vocab = cfg.synth_shared_vocab;
  spec.objects_per_scene_min = cfg.synth_objects_min;
  spec.objects_per_scene_max = cfg.synth_objects_max;
  spec.noise_label_prob = cfg.synth_noise;
  spec.seed = cfg.seed;
  return spec;
}

Corpus load_stream(const ExperimentConfig& cfg) {
  if (!cfg.corpus.empty()) return load_corpus(cfg.corpus);
  return generate_synthetic(synth_spec(cfg));
}

std::vector<SceneVector> encode_all(const Corpus& corpus) {
  std::vector<SceneVector> scenes;
  scenes.reserve(corpus.records.size());
  for (const SceneRecord& rec : corpus.records) scenes.push_back(encode(rec, corpus.vocab));
  return scenes;
}

std::vector<SceneVector> encode_against(const std::vector<SceneRecord>& records,
                                        const Vocabulary& vocab) {
  std::vector<SceneVector> scenes;
  scenes.reserve(records.size());
  for (const SceneRecord& rec : records) scenes.push_back(encode(rec, vocab));
  return scenes;
}

std::vector<Eigen::Index> parse_hidden_sizes(const std::string& text) {
  std::vector<Eigen::Index> sizes;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    if (field.empty()) throw std::invalid_argument("hidden_sizes has an empty entry");
    sizes.push_back(static_cast<Eigen::Index>(std::stoll(field)));
  }
  if (sizes.empty()) throw std::invalid_argument("hidden_sizes is empty");
  return sizes;
}

GrowingModel build_model(const ExperimentConfig& cfg, Eigen::Index vocab_size) {
  const Variant variant = variant_from_string(cfg.variant);
  if (is_growing(variant)) {
    return make_growing_model(variant, vocab_size, model_options(cfg), cfg.seed);
  }
  std::vector<Eigen::Index> sizes;
  if (!cfg.baseline_from.empty()) {
    const SavedModel grown = load_model(std::filesystem::path(cfg.baseline_from));
    for (const RbmLayer& layer : grown.model.layers) sizes.push_back(layer.hidden_units());
    if (variant == Variant::RBM) sizes.resize(1);  // plain RBM copies the first layer only
  } else if (!cfg.hidden_sizes.empty()) {
    sizes = parse_hidden_sizes(cfg.hidden_sizes);
  } else {
    throw std::invalid_argument("baseline variants need hidden_sizes or baseline_from");
  }
  return make_baseline_model(variant, vocab_size, sizes, model_options(cfg), cfg.seed);
}

TrainMode train_mode(const ExperimentConfig& cfg) {
  if (cfg.train_mode == "online") return TrainMode::Online;
  if (cfg.train_mode == "batch") return TrainMode::Batch;
  throw std::invalid_argument("train_mode must be 'online' or 'batch'");
}

std::string join_counts(const ContextCounts& counts) {
  std::string joined;
  for (std::size_t i = 0; i < counts.per_layer.size(); ++i) {
    if (i > 0) joined += ';';
    joined += std::to_string(counts.per_layer[i]);
  }
  return joined;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void growth_row(std::ostream& csv, const GrowingModel& model) {
  const ContextCounts counts = context_counts(model);
  csv << model.scenes_seen << ',' << counts.total << ',' << join_counts(counts) << ','
      << counts.layers << '\n';
}

void require_same_vocabulary(const Vocabulary& model_vocab, const Vocabulary& other,
                             const std::string& what) {
  if (model_vocab.labels() != other.labels()) {
    throw std::invalid_argument(what + " vocabulary does not match the model's vocabulary");
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::runtime_error("config key '" + key + "' expects true/false, got '" + value + "'");
}

}  // namespace

void load_config_file(const std::filesystem::path& path, ExperimentConfig& cfg,
                      const std::function<bool(const std::string&)>& overridden) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (overridden && overridden(key)) continue;

    if (key == "variant") cfg.variant = value;
    else if (key == "corpus") cfg.corpus = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "epochs") cfg.epochs = std::stoi(value);
    else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
    else if (key == "patience_neuron") cfg.patience_neuron = std::stod(value);
    else if (key == "patience_layer") cfg.patience_layer = std::stod(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "gibbs_steps") cfg.gibbs_steps = std::stoi(value);
    else if (key == "rho") cfg.rho = std::stod(value);
    else if (key == "train_mode") cfg.train_mode = value;
    else if (key == "entropy_every") cfg.entropy_every = std::stoi(value);
    else if (key == "baseline_from") cfg.baseline_from = value;
    else if (key == "hidden_sizes") cfg.hidden_sizes = value;
    else if (key == "sample_hidden") cfg.sample_hidden = parse_bool(value, key);
    else if (key == "simplified_confidence") cfg.simplified_confidence = parse_bool(value, key);
    else if (key == "layer_baseline_settle") cfg.layer_baseline_settle = std::stoi(value);
    else if (key == "synth_contexts") cfg.synth_contexts = std::stoi(value);
    else if (key == "synth_scenes_per_context") cfg.synth_scenes_per_context = std::stoi(value);
    else if (key == "synth_vocab_per_context") cfg.synth_vocab_per_context = std::stoi(value);
    else if (key == "synth_shared_vocab") cfg.synth_shared_vocab = std::stoi(value);
    else if (key == "synth_objects_min") cfg.synth_objects_min = std::stoi(value);
    else if (key == "synth_objects_max") cfg.synth_objects_max = std::stoi(value);
    else if (key == "synth_noise") cfg.synth_noise = std::stod(value);
    else {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": unknown config key '" + key + "'");
    }
  }
}

void run_train(const ExperimentConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("train needs epochs >= 1");
  const Corpus corpus = load_stream(cfg);
  const std::vector<SceneVector> scenes = encode_all(corpus);

  GrowingModel model = build_model(cfg, corpus.vocab.size());
  const std::filesystem::path out_dir(cfg.out_dir);
  std::ofstream csv = open_output(out_dir / kGrowthCsvName);
  csv << "scenes_seen,total_contexts,per_layer_contexts,layers\n";

  if (is_growing(model.variant)) {
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (const SceneVector& scene : scenes) {
        process_scene(model, scene);
        growth_row(csv, model);
      }
    }
  } else {
    rbm_train(model, scenes, cfg.epochs, train_mode(cfg));
    const ContextCounts counts = context_counts(model);
    const std::string tail = "," + std::to_string(counts.total) + "," + join_counts(counts) +
                             "," + std::to_string(counts.layers) + "\n";
    for (std::int64_t s = 1; s <= model.scenes_seen; ++s) csv << s << tail;
  }
  if (!csv) throw std::runtime_error("failed writing growth curve");

  save_model(model, corpus.vocab, out_dir / kModelFileName);
}

void run_entropy(const ExperimentConfig& cfg, const std::filesystem::path& model_path,
                 const std::filesystem::path& test_path) {
  if (cfg.entropy_every < 1) throw std::invalid_argument("entropy_every must be >= 1");
  const SavedModel saved = load_model(model_path);

  const Corpus test = load_corpus(test_path);
  const std::vector<SceneVector> test_scenes = encode_against(test.records, saved.vocab);

  const Corpus stream = load_stream(cfg);
  require_same_vocabulary(saved.vocab, stream.vocab, "training stream");
  const std::vector<SceneVector> scenes = encode_all(stream);

  std::ofstream csv = open_output(std::filesystem::path(cfg.out_dir) / kEntropyCsvName);
  csv << "scenes_seen,layers,entropy_mean,entropy_per_layer\n";

  auto emit = [&](const GrowingModel& model) {
    const EntropyReport report = model_entropy(model, test_scenes, cfg.rho);
    csv << model.scenes_seen << ',' << model.layer_count() << ',' << fmt(report.combined) << ',';
    for (std::size_t l = 0; l < report.per_layer.size(); ++l) {
      if (l > 0) csv << ';';
      csv << fmt(report.per_layer[l]);
    }
    csv << '\n';
  };

  GrowingModel model = build_model(cfg, stream.vocab.size());
  if (is_growing(model.variant)) {
    if (cfg.epochs < 1) throw std::invalid_argument("entropy needs epochs >= 1");
    std::int64_t processed = 0;
    const std::int64_t total = static_cast<std::int64_t>(scenes.size()) * cfg.epochs;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (const SceneVector& scene : scenes) {
        process_scene(model, scene);
        ++processed;
        if (processed % cfg.entropy_every == 0 || processed == total) emit(model);
      }
    }
  } else {
    // Fixed-size baselines have no growth trajectory; score the final model.
    rbm_train(model, scenes, cfg.epochs, train_mode(cfg));
    emit(model);
  }
  if (!csv) throw std::runtime_error("failed writing entropy curve");
}

void run_reconstruct(const ExperimentConfig& cfg, const std::filesystem::path& model_path,
                     const std::filesystem::path& test_path) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (cfg.gibbs_steps < 1) throw std::invalid_argument("gibbs_steps must be >= 1");
  const SavedModel saved = load_model(model_path);
  const Corpus test = load_corpus(test_path);
  const std::vector<SceneVector> originals = encode_against(test.records, saved.vocab);

  std::mt19937_64 rng(cfg.seed);
  std::vector<CorruptionResult> corruptions;
  corruptions.reserve(originals.size());
  for (const SceneVector& scene : originals) {
    corruptions.push_back(corrupt(scene, cfg.alpha, rng));
  }

  std::ofstream csv = open_output(std::filesystem::path(cfg.out_dir) / kReconstructionCsvName);
  csv << "mode,cd_k,cda_k,cd,cda\n";
  for (const ReconstructMode mode : {ReconstructMode::KCP, ReconstructMode::UCP}) {
    std::vector<SceneVector> repaired;
    repaired.reserve(originals.size());
    for (std::size_t s = 0; s < originals.size(); ++s) {
      repaired.push_back(reconstruct(saved.model, corruptions[s].corrupted, corruptions[s].mask,
                                     mode, cfg.gibbs_steps));
    }
    const ReconstructionScores scores = score_reconstruction(originals, corruptions, repaired);
    csv << (mode == ReconstructMode::KCP ? "KCP" : "UCP") << ',' << fmt(scores.cd_k) << ','
        << fmt(scores.cda_k) << ',' << fmt(scores.cd) << ',' << fmt(scores.cda) << '\n';
  }
  if (!csv) throw std::runtime_error("failed writing reconstruction scores");
}

void run_topics(const std::filesystem::path& model_path, int layer, int k, std::ostream& out) {
  const SavedModel saved = load_model(model_path);
  const auto table = top_objects(saved.model, layer, k, saved.vocab);

  out << "rank";
  for (std::size_t j = 0; j < table.size(); ++j) out << "\thidden_" << j;
  out << '\n';
  const std::size_t depth = table.empty() ? 0 : table.front().size();
  for (std::size_t r = 0; r < depth; ++r) {
    out << (r + 1);
    for (const auto& unit : table) out << '\t' << unit[r];
    out << '\n';
  }
}

void run_synth(const ExperimentConfig& cfg, const std::filesystem::path& out_path) {
  const Corpus corpus = generate_synthetic(synth_spec(cfg));
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  save_corpus(corpus, out_path);
}

}  // namespace bmctx::cli

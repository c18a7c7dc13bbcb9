#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "bmctx/growth.hpp"

namespace bmctx::cli {

// One key per config-file entry; every key is also a command-line flag of the
// same name. A scene stream is either a corpus file or, when `corpus` is
// empty, the synthetic generator described by the synth_* keys.
struct ExperimentConfig {
  std::string variant = "iRBM";
  std::string corpus;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int epochs = 1;
  double learning_rate = 0.1;
  double patience_neuron = kDefaultNeuronPatience;
  double patience_layer = kDefaultLayerPatience;
  double alpha = 0.4;
  int gibbs_steps = 5;
  double rho = 0.5;
  std::string train_mode = "online";
  int entropy_every = 100;
  std::string baseline_from;   // model file whose layer sizes a baseline copies
  std::string hidden_sizes;    // comma-separated sizes, e.g. "9,7"
  bool sample_hidden = false;
  bool simplified_confidence = true;
  int layer_baseline_settle = 100;
  int synth_contexts = 8;
  int synth_scenes_per_context = 200;
  int synth_vocab_per_context = 10;
  int synth_shared_vocab = 0;
  int synth_objects_min = 5;
  int synth_objects_max = 9;
  double synth_noise = 0.0;
};

/// Applies key=value lines (with '#' comments) to the config. Keys for which
/// `overridden(key)` is true keep their current (command-line) values.
/// Unknown keys are an error.
void load_config_file(const std::filesystem::path& path, ExperimentConfig& cfg,
                      const std::function<bool(const std::string&)>& overridden);

inline constexpr const char* kModelFileName = "model.bm";
inline constexpr const char* kGrowthCsvName = "growth.csv";
inline constexpr const char* kEntropyCsvName = "entropy.csv";
inline constexpr const char* kReconstructionCsvName = "reconstruction.csv";

/// Streams the configured corpus through the configured variant, writing
/// out_dir/growth.csv (one row per scene presentation) and out_dir/model.bm.
void run_train(const ExperimentConfig& config);

/// Replays the training stream described by `config` from scratch and scores
/// the model entropy on the test corpus every `entropy_every` scenes, writing
/// out_dir/entropy.csv. The model file pins the vocabulary (and is how a
/// previously trained run is identified); its labels must cover both corpora.
void run_entropy(const ExperimentConfig& config, const std::filesystem::path& model_path,
                 const std::filesystem::path& test_path);

/// Corrupts every test scene at rate `alpha` and scores KCP and UCP
/// reconstructions of the loaded model, writing out_dir/reconstruction.csv.
void run_reconstruct(const ExperimentConfig& config, const std::filesystem::path& model_path,
                     const std::filesystem::path& test_path);

/// Prints the k strongest objects of every hidden unit of one layer.
void run_topics(const std::filesystem::path& model_path, int layer, int k, std::ostream& out);

/// Writes the synthetic corpus described by the synth_* keys.
void run_synth(const ExperimentConfig& config, const std::filesystem::path& out_path);

}  // namespace bmctx::cli

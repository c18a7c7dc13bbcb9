#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bmctx/cli/experiment.hpp"

namespace {

using bmctx::cli::ExperimentConfig;

// Every config-file key doubles as a flag of the same name; command-line
// values override the file.
void add_experiment_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "Config file with key=value lines");
  cmd->add_option("--variant", cfg.variant, "iRBM, diBM, siRBM, RBM or stackedRBM");
  cmd->add_option("--corpus", cfg.corpus, "Corpus file; empty uses the synthetic generator");
  cmd->add_option("--out_dir", cfg.out_dir, "Output directory");
  cmd->add_option("--seed", cfg.seed, "Seed for every stochastic step");
  cmd->add_option("--epochs", cfg.epochs, "Passes over the stream");
  cmd->add_option("--learning_rate", cfg.learning_rate, "CD-1 step size");
  cmd->add_option("--patience_neuron", cfg.patience_neuron, "Neuron-growth patience t in [0,1)");
  cmd->add_option("--patience_layer", cfg.patience_layer, "Layer-growth patience t in [0,1)");
  cmd->add_option("--alpha", cfg.alpha, "Corruption rate in (0,1]");
  cmd->add_option("--gibbs_steps", cfg.gibbs_steps, "Up-down passes per reconstruction");
  cmd->add_option("--rho", cfg.rho, "Entropy mixing constant in [0,1]");
  cmd->add_option("--train_mode", cfg.train_mode, "online or batch (baselines only)");
  cmd->add_option("--entropy_every", cfg.entropy_every, "Scenes between entropy checkpoints");
  cmd->add_option("--baseline_from", cfg.baseline_from,
                  "Model file whose layer sizes a baseline copies");
  cmd->add_option("--hidden_sizes", cfg.hidden_sizes, "Baseline sizes, e.g. 9,7");
  cmd->add_option("--sample_hidden", cfg.sample_hidden, "Bernoulli-sample h^0 in CD-1");
  cmd->add_option("--simplified_confidence", cfg.simplified_confidence,
                  "Partition-free neuron-growth test (false keeps Z_0 on both sides)");
  cmd->add_option("--layer_baseline_settle", cfg.layer_baseline_settle,
                  "Scenes before a two-unit layer's baseline distance is measured");
  cmd->add_option("--synth_contexts", cfg.synth_contexts, "Planted contexts");
  cmd->add_option("--synth_scenes_per_context", cfg.synth_scenes_per_context,
                  "Scenes per planted context");
  cmd->add_option("--synth_vocab_per_context", cfg.synth_vocab_per_context,
                  "Labels private to each context");
  cmd->add_option("--synth_shared_vocab", cfg.synth_shared_vocab, "Labels shared by all contexts");
  cmd->add_option("--synth_objects_min", cfg.synth_objects_min, "Min objects per scene");
  cmd->add_option("--synth_objects_max", cfg.synth_objects_max, "Max objects per scene");
  cmd->add_option("--synth_noise", cfg.synth_noise, "Per-slot chance of an out-of-context label");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental self-growing Boltzmann machines for scene-context discovery"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, model_path, test_path, synth_out;
  int topics_layer = 0;
  int topics_k = 10;

  CLI::App* train = app.add_subcommand("train", "Stream a corpus through a model variant");
  add_experiment_options(train, cfg, config_path);

  CLI::App* entropy = app.add_subcommand("entropy", "Entropy curve over a replayed training run");
  add_experiment_options(entropy, cfg, config_path);
  entropy->add_option("--model", model_path, "Trained model file")->required();
  entropy->add_option("--test", test_path, "Test corpus file")->required();

  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "Corruption/reconstruction benchmark (KCP and UCP)");
  add_experiment_options(reconstruct, cfg, config_path);
  reconstruct->add_option("--model", model_path, "Trained model file")->required();
  reconstruct->add_option("--test", test_path, "Test corpus file")->required();

  CLI::App* topics = app.add_subcommand("topics", "Strongest objects per hidden unit");
  topics->add_option("--model", model_path, "Trained model file")->required();
  topics->add_option("--layer", topics_layer, "Layer index (0 = bottom)");
  topics->add_option("--k", topics_k, "Objects per unit");

  CLI::App* synth = app.add_subcommand("synth", "Write a planted-context synthetic corpus");
  add_experiment_options(synth, cfg, config_path);
  synth->add_option("--out", synth_out, "Corpus file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      CLI::App* active = app.get_subcommands().front();
      bmctx::cli::load_config_file(config_path, cfg, [active](const std::string& key) {
        const CLI::Option* opt = active->get_option_no_throw("--" + key);
        return opt != nullptr && opt->count() > 0;
      });
    }
    if (train->parsed()) bmctx::cli::run_train(cfg);
    if (entropy->parsed()) bmctx::cli::run_entropy(cfg, model_path, test_path);
    if (reconstruct->parsed()) bmctx::cli::run_reconstruct(cfg, model_path, test_path);
    if (topics->parsed()) bmctx::cli::run_topics(model_path, topics_layer, topics_k, std::cout);
    if (synth->parsed()) bmctx::cli::run_synth(cfg, synth_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmctx/growth.hpp"
#include "bmctx/rbm.hpp"

namespace bmctx {

enum class Variant { iRBM, diBM, siRBM, RBM, StackedRBM };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);
bool is_growing(Variant v);

struct GrowthEvent {
  enum class Kind { NeuronAdded, LayerAdded };
  std::int64_t scene_index = 0;  // 0-based presentation index at event time
  Kind kind = Kind::NeuronAdded;
  int layer_index = 0;
};

struct ModelOptions {
  double learning_rate = 0.1;
  double patience_neuron = kDefaultNeuronPatience;
  double patience_layer = kDefaultLayerPatience;
  bool sample_hidden = false;  // Bernoulli h^0 inside CD-1
  // Compare exp(min c_v) directly (the partition-free form of the growth
  // test). Setting false keeps the stored Z_0 on both sides; that form stops
  // growing once a reciprocal column inflates the baseline partition.
  bool simplified_confidence = true;
  // Scenes after a layer reaches two hidden units before its baseline
  // distance r_f is measured; a just-initialized reciprocal column distorts
  // the layer's distance scale until it has trained.
  int layer_baseline_settle = 100;
  double fresh_weight_sd = 0.01;      // Gaussian init of a fresh layer
  double new_layer_weight_range = 0.01;  // uniform +-range for a layer appended mid-stream
  double ripple_row_weight = 0.01;    // upper-layer weights to a freshly added lower neuron
};

/// An ordered stack of layers plus the growth bookkeeping that drives
/// structural changes. Layer l's visible band is layer l-1's hidden band;
/// the bottom visible band is the vocabulary.
///
/// Training is single-writer: one scene update at a time per model. Copies
/// are cheap snapshots safe to evaluate concurrently.
struct GrowingModel {
  Variant variant = Variant::iRBM;
  std::vector<RbmLayer> layers;
  std::vector<ConfidenceState> confidence_states;
  std::vector<LayerGrowthState> layer_growth_states;
  // Per layer: scenes left until r_f is measured (-1 = nothing pending).
  std::vector<int> baseline_countdowns;
  std::vector<GrowthEvent> events;
  std::int64_t scenes_seen = 0;
  std::uint64_t rng_seed = 0;
  ModelOptions options;

  Eigen::Index vocabulary_size() const { return layers.front().visible_units(); }
  int layer_count() const { return static_cast<int>(layers.size()); }
};

/// A growing variant (iRBM, diBM, siRBM) starting from one layer with a
/// single hidden unit. The baseline confidence is taken from the fresh
/// weights, so the growth test cannot fire before any drift exists.
GrowingModel make_growing_model(Variant variant, Eigen::Index vocabulary,
                                const ModelOptions& options = {}, std::uint64_t seed = 0);

/// A fixed-size baseline (RBM with one size, StackedRBM with a size chain).
GrowingModel make_baseline_model(Variant variant, Eigen::Index vocabulary,
                                 const std::vector<Eigen::Index>& hidden_sizes,
                                 const ModelOptions& options = {}, std::uint64_t seed = 0);

// One streaming step per variant. Returned events are also appended to
// model.events. Each asserts its variant.
std::vector<GrowthEvent> irbm_process_scene(GrowingModel& model, const SceneVector& scene);
std::vector<GrowthEvent> dibm_process_scene(GrowingModel& model, const SceneVector& scene);
std::vector<GrowthEvent> sirbm_process_scene(GrowingModel& model, const SceneVector& scene);

/// Dispatches to the variant's step; rejects non-growing variants.
std::vector<GrowthEvent> process_scene(GrowingModel& model, const SceneVector& scene);

enum class TrainMode { Online, Batch };

/// Fixed-structure training for the baselines. Online mode walks the corpus
/// in stream order; batch mode shuffles each full pass (seeded). StackedRBM
/// trains greedily bottom-up, `epochs` passes per layer.
void rbm_train(GrowingModel& model, const std::vector<SceneVector>& corpus, int epochs,
               TrainMode mode);

/// Hidden activation probabilities of every layer, bottom to top.
std::vector<HiddenState> propagate_up(const GrowingModel& model, const SceneVector& scene);

enum class ReconstructMode {
  KCP,  // known corrupted part: clamp every position outside the corruption mask
  UCP   // unknown corrupted part: nothing clamped
};

/// Full-stack reconstruction of a corrupted scene (mask true = corrupted).
SceneVector reconstruct(const GrowingModel& model, const SceneVector& corrupted,
                        const std::vector<bool>& corruption_mask, ReconstructMode mode,
                        int steps);

}  // namespace bmctx

#include "bmctx/model.hpp"

#include <numeric>
#include <stdexcept>

#include "bmctx/random.hpp"

namespace bmctx {

namespace {

constexpr std::uint64_t kShuffleStream = 0x10000000ULL;  // keeps epoch seeds off layer ordinals

void require_variant(const GrowingModel& model, Variant expected, const char* op) {
  if (model.variant != expected) {
    throw std::invalid_argument(std::string(op) + " called on a " + to_string(model.variant) +
                                " model");
  }
}

void require_scene(const GrowingModel& model, const SceneVector& scene) {
  if (scene.size() != model.vocabulary_size()) {
    throw std::invalid_argument("scene length " + std::to_string(scene.size()) +
                                " does not match vocabulary size " +
                                std::to_string(model.vocabulary_size()));
  }
}

ConfidenceState initial_confidence(const RbmLayer& layer, double patience) {
  const ModelConfidence mc = model_confidence(visible_confidences(layer));
  return {mc.c_m, mc.z0, patience};
}

// One streaming step for a single layer: CD-1, confidence check, possible
// neuron add with baseline recomputation. Returns true when the layer grew.
bool update_layer(RbmLayer& layer, ConfidenceState& conf, const SceneVector& input,
                  const ModelOptions& opts) {
  cd1_update(layer, input, CdOptions{opts.sample_hidden});
  const ModelConfidence current = model_confidence(visible_confidences(layer));
  if (!needs_new_neuron(current, conf, opts.simplified_confidence)) return false;

  add_neuron(layer);
  const ModelConfidence grown = model_confidence(visible_confidences(layer));
  conf.baseline_model_confidence = grown.c_m;
  conf.partition_at_baseline = grown.z0;
  return true;
}

// A new top layer with one hidden unit. Layers appended mid-stream get
// uniform weights in +-new_layer_weight_range; siRBM stacks a regular fresh
// (Gaussian) layer instead.
void append_layer(GrowingModel& model, bool uniform_weights) {
  const Eigen::Index below = model.layers.back().hidden_units();
  const std::uint64_t seed = derive_seed(model.rng_seed, model.layers.size());
  RbmLayer layer(below, 1, model.options.learning_rate, seed, model.options.fresh_weight_sd);
  if (uniform_weights) {
    const double r = model.options.new_layer_weight_range;
    layer.rng.seed(seed);
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      layer.weights(i, 0) = uniform_in(layer.rng, -r, r);
    }
  }
  model.confidence_states.push_back(initial_confidence(layer, model.options.patience_neuron));
  model.layer_growth_states.push_back({0.0, model.options.patience_layer});
  model.baseline_countdowns.push_back(-1);
  model.layers.push_back(std::move(layer));
}

// When a lower layer gains a hidden unit, the layer above gains a visible
// unit; the new row starts at a small constant (the unit has no history).
void append_visible_row(RbmLayer& layer, double weight) {
  layer.weights.conservativeResize(layer.weights.rows() + 1, Eigen::NoChange);
  layer.weights.row(layer.weights.rows() - 1).setConstant(weight);
}

void check_patience(const ModelOptions& options) {
  if (options.patience_neuron < 0.0 || options.patience_neuron >= 1.0 ||
      options.patience_layer < 0.0 || options.patience_layer >= 1.0) {
    throw std::invalid_argument("patience values must lie in [0, 1)");
  }
  if (options.layer_baseline_settle < 0) {
    throw std::invalid_argument("layer_baseline_settle must be >= 0");
  }
}

// Layer-growth bookkeeping for the model's last layer. The baseline distance
// is measured `layer_baseline_settle` scenes after the layer reaches two
// hidden units, once the fresh column has trained; a settle of 0 measures it
// immediately. Returns true when a new layer should be appended.
bool track_layer_growth(GrowingModel& model, bool last_grew) {
  const int f = model.layer_count() - 1;
  RbmLayer& top = model.layers[f];
  LayerGrowthState& lg = model.layer_growth_states[f];
  int& countdown = model.baseline_countdowns[f];

  if (top.hidden_units() < 2) {
    lg.baseline_layer_confidence = 0.0;
    countdown = -1;
    return false;
  }
  if (last_grew && top.hidden_units() == 2) {
    countdown = model.options.layer_baseline_settle;
    if (countdown == 0) lg.baseline_layer_confidence = layer_min_distance(top);
    return false;
  }
  if (countdown > 0) {
    if (--countdown == 0) lg.baseline_layer_confidence = layer_min_distance(top);
    return false;
  }
  return lg.baseline_layer_confidence > 0.0 &&
         needs_new_layer(layer_min_distance(top), lg);
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::iRBM: return "iRBM";
    case Variant::diBM: return "diBM";
    case Variant::siRBM: return "siRBM";
    case Variant::RBM: return "RBM";
    case Variant::StackedRBM: return "stackedRBM";
  }
  throw std::logic_error("unreachable variant");
}

Variant variant_from_string(const std::string& name) {
  if (name == "iRBM") return Variant::iRBM;
  if (name == "diBM") return Variant::diBM;
  if (name == "siRBM") return Variant::siRBM;
  if (name == "RBM") return Variant::RBM;
  if (name == "stackedRBM") return Variant::StackedRBM;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected iRBM, diBM, siRBM, RBM or stackedRBM)");
}

bool is_growing(Variant v) {
  return v == Variant::iRBM || v == Variant::diBM || v == Variant::siRBM;
}

GrowingModel make_growing_model(Variant variant, Eigen::Index vocabulary,
                                const ModelOptions& options, std::uint64_t seed) {
  if (!is_growing(variant)) {
    throw std::invalid_argument("make_growing_model: " + to_string(variant) +
                                " is a fixed-size baseline");
  }
  if (vocabulary < 1) throw std::invalid_argument("vocabulary size must be >= 1");
  check_patience(options);

  GrowingModel model;
  model.variant = variant;
  model.rng_seed = seed;
  model.options = options;
  RbmLayer layer(vocabulary, 1, options.learning_rate, derive_seed(seed, 0),
                 options.fresh_weight_sd);
  model.confidence_states.push_back(initial_confidence(layer, options.patience_neuron));
  model.layer_growth_states.push_back({0.0, options.patience_layer});
  model.baseline_countdowns.push_back(-1);
  model.layers.push_back(std::move(layer));
  return model;
}

GrowingModel make_baseline_model(Variant variant, Eigen::Index vocabulary,
                                 const std::vector<Eigen::Index>& hidden_sizes,
                                 const ModelOptions& options, std::uint64_t seed) {
  if (is_growing(variant)) {
    throw std::invalid_argument("make_baseline_model: " + to_string(variant) +
                                " grows its own structure");
  }
  if (vocabulary < 1) throw std::invalid_argument("vocabulary size must be >= 1");
  if (hidden_sizes.empty()) throw std::invalid_argument("baseline needs at least one layer size");
  if (variant == Variant::RBM && hidden_sizes.size() != 1) {
    throw std::invalid_argument("plain RBM takes exactly one hidden size");
  }
  check_patience(options);

  GrowingModel model;
  model.variant = variant;
  model.rng_seed = seed;
  model.options = options;
  Eigen::Index visible = vocabulary;
  for (std::size_t l = 0; l < hidden_sizes.size(); ++l) {
    if (hidden_sizes[l] < 1) throw std::invalid_argument("hidden sizes must be >= 1");
    RbmLayer layer(visible, hidden_sizes[l], options.learning_rate, derive_seed(seed, l),
                   options.fresh_weight_sd);
    visible = hidden_sizes[l];
    model.confidence_states.push_back(initial_confidence(layer, options.patience_neuron));
    model.layer_growth_states.push_back({0.0, options.patience_layer});
    model.baseline_countdowns.push_back(-1);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

std::vector<GrowthEvent> irbm_process_scene(GrowingModel& model, const SceneVector& scene) {
  require_variant(model, Variant::iRBM, "irbm_process_scene");
  require_scene(model, scene);

  std::vector<GrowthEvent> events;
  if (update_layer(model.layers[0], model.confidence_states[0], scene, model.options)) {
    events.push_back({model.scenes_seen, GrowthEvent::Kind::NeuronAdded, 0});
  }
  model.events.insert(model.events.end(), events.begin(), events.end());
  ++model.scenes_seen;
  return events;
}

std::vector<GrowthEvent> dibm_process_scene(GrowingModel& model, const SceneVector& scene) {
  require_variant(model, Variant::diBM, "dibm_process_scene");
  require_scene(model, scene);

  std::vector<GrowthEvent> events;
  const int n = model.layer_count();
  SceneVector input = scene;
  bool last_grew = false;
  for (int l = 0; l < n; ++l) {
    const bool grew =
        update_layer(model.layers[l], model.confidence_states[l], input, model.options);
    if (grew) {
      events.push_back({model.scenes_seen, GrowthEvent::Kind::NeuronAdded, l});
      if (l + 1 < n) {
        append_visible_row(model.layers[l + 1], model.options.ripple_row_weight);
      }
    }
    if (l == n - 1) last_grew = grew;
    input = hidden_activations(model.layers[l], input);
  }

  if (track_layer_growth(model, last_grew)) {
    model.layer_growth_states[n - 1].baseline_layer_confidence = 0.0;
    append_layer(model, /*uniform_weights=*/true);
    events.push_back({model.scenes_seen, GrowthEvent::Kind::LayerAdded, n});
  }

  model.events.insert(model.events.end(), events.begin(), events.end());
  ++model.scenes_seen;
  return events;
}

std::vector<GrowthEvent> sirbm_process_scene(GrowingModel& model, const SceneVector& scene) {
  require_variant(model, Variant::siRBM, "sirbm_process_scene");
  require_scene(model, scene);

  std::vector<GrowthEvent> events;
  const int n = model.layer_count();
  const int top_i = n - 1;

  // Lower layers are frozen; only their activations flow upward.
  SceneVector input = scene;
  for (int l = 0; l < top_i; ++l) {
    input = hidden_activations(model.layers[l], input);
  }
  const bool grew =
      update_layer(model.layers[top_i], model.confidence_states[top_i], input, model.options);
  if (grew) {
    events.push_back({model.scenes_seen, GrowthEvent::Kind::NeuronAdded, top_i});
  }

  RbmLayer& top = model.layers[top_i];
  bool stack = false;
  if (n == 1) {
    // No previous layer to compare against yet; bootstrap with the drifting
    // min-distance test until the first stack event.
    stack = track_layer_growth(model, grew);
  } else if (top.hidden_units() >= 2 &&
             layer_min_distance(top) < layer_min_distance(model.layers[top_i - 1])) {
    stack = true;
  }

  if (stack) {
    append_layer(model, /*uniform_weights=*/false);
    events.push_back({model.scenes_seen, GrowthEvent::Kind::LayerAdded, n});
  }

  model.events.insert(model.events.end(), events.begin(), events.end());
  ++model.scenes_seen;
  return events;
}

std::vector<GrowthEvent> process_scene(GrowingModel& model, const SceneVector& scene) {
  switch (model.variant) {
    case Variant::iRBM: return irbm_process_scene(model, scene);
    case Variant::diBM: return dibm_process_scene(model, scene);
    case Variant::siRBM: return sirbm_process_scene(model, scene);
    default:
      throw std::invalid_argument("process_scene: " + to_string(model.variant) +
                                  " is trained with rbm_train");
  }
}

void rbm_train(GrowingModel& model, const std::vector<SceneVector>& corpus, int epochs,
               TrainMode mode) {
  if (model.variant != Variant::RBM && model.variant != Variant::StackedRBM) {
    throw std::invalid_argument("rbm_train handles the fixed-size baselines only");
  }
  if (corpus.empty()) throw std::invalid_argument("rbm_train needs a non-empty corpus");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  for (const SceneVector& scene : corpus) require_scene(model, scene);

  std::mt19937_64 order_rng(derive_seed(model.rng_seed, kShuffleStream));
  const CdOptions cd{model.options.sample_hidden};

  std::vector<SceneVector> inputs = corpus;
  for (int l = 0; l < model.layer_count(); ++l) {
    for (int e = 0; e < epochs; ++e) {
      std::vector<std::size_t> order(inputs.size());
      std::iota(order.begin(), order.end(), 0);
      if (mode == TrainMode::Batch) shuffle(order, order_rng);
      for (std::size_t idx : order) {
        cd1_update(model.layers[l], inputs[idx], cd);
        ++model.scenes_seen;
      }
    }
    if (l + 1 < model.layer_count()) {
      for (SceneVector& scene : inputs) {
        scene = hidden_activations(model.layers[l], scene);
      }
    }
  }
}

std::vector<HiddenState> propagate_up(const GrowingModel& model, const SceneVector& scene) {
  require_scene(model, scene);
  std::vector<HiddenState> states;
  states.reserve(model.layers.size());
  SceneVector input = scene;
  for (const RbmLayer& layer : model.layers) {
    input = hidden_activations(layer, input);
    states.push_back(input);
  }
  return states;
}

SceneVector reconstruct(const GrowingModel& model, const SceneVector& corrupted,
                        const std::vector<bool>& corruption_mask, ReconstructMode mode,
                        int steps) {
  require_scene(model, corrupted);
  if (static_cast<Eigen::Index>(corruption_mask.size()) != corrupted.size()) {
    throw std::invalid_argument("corruption mask length does not match the scene");
  }
  std::vector<bool> clamp;
  if (mode == ReconstructMode::KCP) {
    clamp.resize(corruption_mask.size());
    for (std::size_t i = 0; i < corruption_mask.size(); ++i) clamp[i] = !corruption_mask[i];
  }
  return gibbs_reconstruct({model.layers.data(), model.layers.size()}, corrupted, clamp, steps);
}

}  // namespace bmctx

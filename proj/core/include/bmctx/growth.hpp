#pragma once

#include <cmath>

#include "bmctx/rbm.hpp"

namespace bmctx {

inline const double kDefaultNeuronPatience = std::exp(-0.5);
inline constexpr double kDefaultLayerPatience = 0.1;

// Guard for the reciprocal new-neuron rule: a row sum with magnitude below
// kDegenerateRowSum is replaced by that bound (keeping the sign, sign(0) = +1)
// and the resulting weight is clipped to +-kNewWeightCap.
inline constexpr double kDegenerateRowSum = 1e-6;
inline constexpr double kNewWeightCap = 10.0;

/// Baseline confidence bookkeeping for neuron growth. The baseline and its
/// partition value are rewritten together whenever the layer grows.
struct ConfidenceState {
  double baseline_model_confidence = 0.0;  // c_m stored at the last structural change
  double partition_at_baseline = 1.0;      // Z_0 that produced the baseline
  double patience_neuron = kDefaultNeuronPatience;  // in [0, 1); 0 disables growth
};

/// Baseline min-distance bookkeeping for layer growth; 0 means "unset".
struct LayerGrowthState {
  double baseline_layer_confidence = 0.0;          // r_f
  double patience_layer = kDefaultLayerPatience;   // in [0, 1); 0 disables growth
};

struct ModelConfidence {
  double c_m = 0.0;
  double z0 = 1.0;
};

/// Per-visible confidence c_v = max_j w_vj: how strongly some context claims
/// each object. Raw maximum, negative entries included.
Eigen::VectorXd visible_confidences(const RbmLayer& layer);

/// Softmax-style model confidence: c_m = exp(min_v c_v) / sum_v exp(c_v).
/// Returns both c_m and the partition value Z_0.
ModelConfidence model_confidence(const Eigen::VectorXd& confidences);

/// Growth test: current confidence dropped below patience * baseline.
bool needs_new_neuron(double current_c_m, const ConfidenceState& state);

/// Same test; with drop_partition the Z_0 factors are removed from both
/// sides, comparing exp(min c_v) directly.
bool needs_new_neuron(const ModelConfidence& current, const ConfidenceState& state,
                      bool drop_partition);

/// Appends one hidden unit whose incoming weight from visible i is the
/// reciprocal of i's existing row sum (guard constants above). Existing
/// columns are untouched.
void add_neuron(RbmLayer& layer);

/// Symmetrized KL divergence between the softmaxed incoming-weight columns of
/// two hidden units.
double hidden_distance(const RbmLayer& layer, Eigen::Index j1, Eigen::Index j2);

/// Minimum hidden_distance over all unordered pairs; requires |h| >= 2.
double layer_min_distance(const RbmLayer& layer);

/// Layer growth test: min pairwise distance dropped below patience * r_f.
/// Always false while the baseline is unset (r_f = 0).
bool needs_new_layer(double current_r, const LayerGrowthState& state);

}  // namespace bmctx

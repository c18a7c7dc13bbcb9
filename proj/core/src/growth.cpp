#include "bmctx/growth.hpp"

#include <algorithm>
#include <stdexcept>

namespace bmctx {

namespace {

// Max-subtracted softmax of a weight column; strictly positive entries.
Eigen::VectorXd softmax(const Eigen::VectorXd& w) {
  const double m = w.maxCoeff();
  Eigen::VectorXd e = (w.array() - m).exp();
  return e / e.sum();
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

}  // namespace

Eigen::VectorXd visible_confidences(const RbmLayer& layer) {
  return layer.weights.rowwise().maxCoeff();
}

ModelConfidence model_confidence(const Eigen::VectorXd& confidences) {
  if (confidences.size() == 0) {
    throw std::invalid_argument("model_confidence needs a non-empty confidence vector");
  }
  if (!confidences.allFinite()) {
    throw std::invalid_argument("model_confidence needs finite confidences");
  }
  const double z0 = confidences.array().exp().sum();
  return {std::exp(confidences.minCoeff()) / z0, z0};
}

bool needs_new_neuron(double current_c_m, const ConfidenceState& state) {
  return current_c_m < state.patience_neuron * state.baseline_model_confidence;
}

bool needs_new_neuron(const ModelConfidence& current, const ConfidenceState& state,
                      bool drop_partition) {
  if (drop_partition) {
    // exp(min c_v) compared directly on both sides
    return current.c_m * current.z0 <
           state.patience_neuron * state.baseline_model_confidence * state.partition_at_baseline;
  }
  return needs_new_neuron(current.c_m, state);
}

void add_neuron(RbmLayer& layer) {
  const Eigen::Index n_visible = layer.weights.rows();
  const Eigen::Index k = layer.weights.cols();
  const Eigen::VectorXd row_sums = layer.weights.rowwise().sum();
  layer.weights.conservativeResize(Eigen::NoChange, k + 1);
  for (Eigen::Index i = 0; i < n_visible; ++i) {
    double s = row_sums[i];
    if (std::abs(s) < kDegenerateRowSum) {
      s = s < 0.0 ? -kDegenerateRowSum : kDegenerateRowSum;
    }
    layer.weights(i, k) = std::clamp(1.0 / s, -kNewWeightCap, kNewWeightCap);
  }
}

double hidden_distance(const RbmLayer& layer, Eigen::Index j1, Eigen::Index j2) {
  const Eigen::Index h = layer.hidden_units();
  if (j1 < 0 || j1 >= h || j2 < 0 || j2 >= h) {
    throw std::invalid_argument("hidden_distance: hidden index out of range");
  }
  const Eigen::VectorXd p = softmax(layer.weights.col(j1));
  const Eigen::VectorXd q = softmax(layer.weights.col(j2));
  // the symmetrized KL is non-negative; rounding may dip a hair below zero
  return std::max(0.0, 0.5 * (kl_divergence(p, q) + kl_divergence(q, p)));
}

double layer_min_distance(const RbmLayer& layer) {
  const Eigen::Index h = layer.hidden_units();
  if (h < 2) {
    throw std::invalid_argument("layer_min_distance needs at least two hidden units");
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < h; ++a) {
    for (Eigen::Index b = a + 1; b < h; ++b) {
      best = std::min(best, hidden_distance(layer, a, b));
    }
  }
  return best;
}

bool needs_new_layer(double current_r, const LayerGrowthState& state) {
  if (state.baseline_layer_confidence <= 0.0) return false;
  return current_r < state.patience_layer * state.baseline_layer_confidence;
}

}  // namespace bmctx

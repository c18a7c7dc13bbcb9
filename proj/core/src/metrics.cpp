#include "bmctx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bmctx/random.hpp"

namespace bmctx {

namespace {

bool is_binary(const SceneVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && v[i] != 1.0) return false;
  }
  return true;
}

double entropy_nats(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

Eigen::VectorXd column_softmax(const Eigen::VectorXd& w) {
  const double m = w.maxCoeff();
  Eigen::VectorXd e = (w.array() - m).exp();
  return e / e.sum();
}

}  // namespace

CorruptionResult corrupt(const SceneVector& scene, double alpha, std::mt19937_64& rng) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("corruption rate must lie in [0,1]");
  }
  if (!is_binary(scene)) {
    throw std::invalid_argument("corrupt expects a binary scene");
  }
  const Eigen::Index n = scene.size();
  const auto count = static_cast<Eigen::Index>(std::llround(alpha * static_cast<double>(n)));

  CorruptionResult result;
  result.corrupted = scene;
  result.mask.assign(static_cast<std::size_t>(n), false);
  result.rate = alpha;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto pick = k + static_cast<Eigen::Index>(
                              uniform_below(rng, static_cast<std::uint64_t>(n - k)));
    std::swap(order[k], order[pick]);
    const Eigen::Index dim = order[k];
    result.mask[static_cast<std::size_t>(dim)] = true;
    if (uniform_unit(rng) < 0.5) {
      result.corrupted[dim] = 1.0 - result.corrupted[dim];
    }
  }
  return result;
}

CorruptionResult corrupt(const SceneVector& scene, double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return corrupt(scene, alpha, rng);
}

ReconstructionScores score_reconstruction(const std::vector<SceneVector>& originals,
                                          const std::vector<CorruptionResult>& corruptions,
                                          const std::vector<SceneVector>& reconstructed) {
  const std::size_t n = originals.size();
  if (corruptions.size() != n || reconstructed.size() != n) {
    throw std::invalid_argument("score_reconstruction needs equal-length lists");
  }
  if (n == 0) throw std::invalid_argument("score_reconstruction needs at least one scene");

  double err_full = 0.0;    // sum |v - v'|
  double err_masked = 0.0;  // same sum over selected dimensions only
  double selected = 0.0;    // total selected dimensions
  double damage = 0.0;      // sum |v - corrupted|

  for (std::size_t s = 0; s < n; ++s) {
    const SceneVector& v = originals[s];
    const CorruptionResult& c = corruptions[s];
    const SceneVector& r = reconstructed[s];
    if (c.corrupted.size() != v.size() || r.size() != v.size() ||
        static_cast<Eigen::Index>(c.mask.size()) != v.size()) {
      throw std::invalid_argument("score_reconstruction: inconsistent dimensions at scene " +
                                  std::to_string(s));
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double e = std::abs(v[i] - r[i]);
      err_full += e;
      damage += std::abs(v[i] - c.corrupted[i]);
      if (c.mask[static_cast<std::size_t>(i)]) {
        err_masked += e;
        selected += 1.0;
      }
    }
  }

  if (selected == 0.0) {
    throw std::invalid_argument("degenerate benchmark: no dimensions were selected");
  }
  if (damage == 0.0) {
    throw std::invalid_argument("degenerate benchmark: corruption flipped no bits");
  }

  return {1.0 - err_full / selected, 1.0 - err_full / damage, 1.0 - err_masked / selected,
          1.0 - err_masked / damage};
}

EntropyReport model_entropy(const GrowingModel& model, const std::vector<SceneVector>& scenes,
                            double rho) {
  if (scenes.empty()) throw std::invalid_argument("model_entropy needs at least one scene");
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("rho must lie in [0,1]");

  const int n_layers = model.layer_count();
  std::vector<double> h_objects(n_layers, 0.0);
  for (int l = 0; l < n_layers; ++l) {
    const RbmLayer& layer = model.layers[l];
    double h = 0.0;
    for (Eigen::Index j = 0; j < layer.hidden_units(); ++j) {
      h += entropy_nats(column_softmax(layer.weights.col(j)));
    }
    h_objects[l] = h / static_cast<double>(layer.hidden_units());
  }

  std::vector<double> h_contexts(n_layers, 0.0);
  for (const SceneVector& scene : scenes) {
    SceneVector input = scene;
    for (int l = 0; l < n_layers; ++l) {
      input = hidden_activations(model.layers[l], input);
      // logistic outputs are strictly positive, so the normalizer never vanishes
      h_contexts[l] += entropy_nats(input / input.sum());
    }
  }
  for (double& h : h_contexts) h /= static_cast<double>(scenes.size());

  EntropyReport report;
  report.rho = rho;
  report.per_layer.resize(n_layers);
  for (int l = 0; l < n_layers; ++l) {
    report.per_layer[l] = rho * h_objects[l] + (1.0 - rho) * h_contexts[l];
    report.h_object_given_context += h_objects[l];
    report.h_context_given_scene += h_contexts[l];
  }
  report.h_object_given_context /= n_layers;
  report.h_context_given_scene /= n_layers;
  report.combined = rho * report.h_object_given_context + (1.0 - rho) * report.h_context_given_scene;
  return report;
}

std::vector<std::vector<std::string>> top_objects(const GrowingModel& model, int layer, int k,
                                                  const Vocabulary& vocab) {
  if (layer < 0 || layer >= model.layer_count()) {
    throw std::invalid_argument("top_objects: layer index out of range");
  }
  if (k < 1) throw std::invalid_argument("top_objects needs k >= 1");
  const RbmLayer& rbm = model.layers[static_cast<std::size_t>(layer)];
  const Eigen::Index n_inputs = rbm.visible_units();
  if (layer == 0 && vocab.size() != n_inputs) {
    throw std::invalid_argument("vocabulary size does not match the bottom layer");
  }
  const Eigen::Index take = std::min<Eigen::Index>(k, n_inputs);

  std::vector<std::vector<std::string>> result;
  result.reserve(static_cast<std::size_t>(rbm.hidden_units()));
  for (Eigen::Index j = 0; j < rbm.hidden_units(); ++j) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n_inputs));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (rbm.weights(a, j) != rbm.weights(b, j)) return rbm.weights(a, j) > rbm.weights(b, j);
      return a < b;  // ties go to the lower vocabulary index
    });
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(take));
    for (Eigen::Index r = 0; r < take; ++r) {
      if (layer == 0) {
        names.push_back(vocab.label(idx[static_cast<std::size_t>(r)]));
      } else {
        names.push_back("L" + std::to_string(layer - 1) + ".h" +
                        std::to_string(idx[static_cast<std::size_t>(r)]));
      }
    }
    result.push_back(std::move(names));
  }
  return result;
}

ContextCounts context_counts(const GrowingModel& model) {
  ContextCounts counts;
  counts.layers = model.layer_count();
  for (const RbmLayer& layer : model.layers) {
    counts.per_layer.push_back(layer.hidden_units());
    counts.total += layer.hidden_units();
  }
  return counts;
}

}  // namespace bmctx

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bmctx/data.hpp"
#include "bmctx/model.hpp"

namespace bmctx {

struct CorruptionResult {
  SceneVector corrupted;    // the damaged scene
  std::vector<bool> mask;   // true = dimension was selected for corruption
  double rate = 0.0;        // alpha
};

/// Selects round(alpha * |v|) distinct dimensions uniformly at random and
/// flips each with probability 0.5. The mask records selections, flipped or
/// not; the scene must be binary.
CorruptionResult corrupt(const SceneVector& scene, double alpha, std::mt19937_64& rng);
CorruptionResult corrupt(const SceneVector& scene, double alpha, std::uint64_t seed);

/// The four reconstruction scores. CD/CDa run over the whole vector; the ^k
/// variants restrict the error sum to the corrupted part. Each is at most 1
/// and goes negative when a method destroys more than it repairs.
struct ReconstructionScores {
  double cd = 0.0;
  double cda = 0.0;
  double cd_k = 0.0;
  double cda_k = 0.0;
};

/// cd   = 1 - sum |v - v'| / (total selected dimensions)
/// cda  = 1 - sum |v - v'| / sum |v - corrupted|
/// cd^k / cda^k: numerators restricted to selected dimensions.
/// A zero denominator is a degenerate benchmark and is rejected.
ReconstructionScores score_reconstruction(const std::vector<SceneVector>& originals,
                                          const std::vector<CorruptionResult>& corruptions,
                                          const std::vector<SceneVector>& reconstructed);

struct EntropyReport {
  double h_object_given_context = 0.0;  // layer mean of H(o|c)
  double h_context_given_scene = 0.0;   // layer mean of H(c|s)
  double combined = 0.0;                // rho * H(o|c) + (1 - rho) * H(c|s)
  double rho = 0.5;
  std::vector<double> per_layer;        // combined entropy per layer
};

/// Natural-log entropies. Per layer: p(o|c_j) is the softmax of hidden unit
/// j's incoming weights (contexts weighted uniformly); p(c|s) is the layer's
/// hidden activation vector normalized to sum 1, averaged over the scenes.
EntropyReport model_entropy(const GrowingModel& model, const std::vector<SceneVector>& scenes,
                            double rho);

/// For each hidden unit of the layer, the k strongest-weight input labels in
/// descending order, ties broken by vocabulary index. k is truncated to the
/// layer's input width. Units above the bottom layer are named "L<l>.h<j>".
std::vector<std::vector<std::string>> top_objects(const GrowingModel& model, int layer, int k,
                                                  const Vocabulary& vocab);

struct ContextCounts {
  std::int64_t total = 0;
  std::vector<std::int64_t> per_layer;
  int layers = 0;
};

ContextCounts context_counts(const GrowingModel& model);

}  // namespace bmctx

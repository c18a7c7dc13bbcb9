#pragma once

#include <filesystem>
#include <iosfwd>

#include "bmctx/data.hpp"
#include "bmctx/model.hpp"

namespace bmctx {

struct SavedModel {
  GrowingModel model;
  Vocabulary vocab;
};

// Versioned text format: header fields, vocabulary labels, per-layer
// dimensions and growth states, weights row-major (one line per visible
// unit, printed with %.17g so doubles round-trip bit-exactly), event log.
void save_model(const GrowingModel& model, const Vocabulary& vocab, std::ostream& out);
void save_model(const GrowingModel& model, const Vocabulary& vocab,
                const std::filesystem::path& path);

SavedModel load_model(std::istream& in);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace bmctx

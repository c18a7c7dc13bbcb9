#include "bmctx/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bmctx {

namespace {

constexpr const char* kMagic = "bmctx-model";
constexpr int kFormatVersion = 1;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw std::runtime_error(std::string("model file truncated, expected ") + what);
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // "key value..." line; returns the value part.
  std::string field(const std::string& key) {
    const std::string line = next(key.c_str());
    if (line.rfind(key + " ", 0) != 0) {
      throw std::runtime_error("model file line " + std::to_string(line_no_) + ": expected '" +
                               key + " ...', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }

  double field_double(const std::string& key) { return std::stod(field(key)); }
  long long field_int(const std::string& key) { return std::stoll(field(key)); }
  std::uint64_t field_u64(const std::string& key) { return std::stoull(field(key)); }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void save_model(const GrowingModel& model, const Vocabulary& vocab, std::ostream& out) {
  if (vocab.size() != model.vocabulary_size()) {
    throw std::invalid_argument("vocabulary size does not match the model's visible band");
  }
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "variant " << to_string(model.variant) << '\n';
  out << "seed " << model.rng_seed << '\n';
  out << "scenes_seen " << model.scenes_seen << '\n';
  const ModelOptions& o = model.options;
  out << "learning_rate " << fmt(o.learning_rate) << '\n';
  out << "patience_neuron " << fmt(o.patience_neuron) << '\n';
  out << "patience_layer " << fmt(o.patience_layer) << '\n';
  out << "sample_hidden " << (o.sample_hidden ? 1 : 0) << '\n';
  out << "simplified_confidence " << (o.simplified_confidence ? 1 : 0) << '\n';
  out << "layer_baseline_settle " << o.layer_baseline_settle << '\n';
  out << "fresh_weight_sd " << fmt(o.fresh_weight_sd) << '\n';
  out << "new_layer_weight_range " << fmt(o.new_layer_weight_range) << '\n';
  out << "ripple_row_weight " << fmt(o.ripple_row_weight) << '\n';

  out << "vocabulary " << vocab.size() << '\n';
  for (const std::string& label : vocab.labels()) out << label << '\n';

  out << "layers " << model.layer_count() << '\n';
  for (int l = 0; l < model.layer_count(); ++l) {
    const RbmLayer& layer = model.layers[l];
    out << "layer " << l << " visible " << layer.visible_units() << " hidden "
        << layer.hidden_units() << " learning_rate " << fmt(layer.learning_rate) << " seed "
        << layer.rng_seed << '\n';
    const ConfidenceState& c = model.confidence_states[l];
    out << "confidence " << fmt(c.baseline_model_confidence) << ' '
        << fmt(c.partition_at_baseline) << ' ' << fmt(c.patience_neuron) << '\n';
    const LayerGrowthState& g = model.layer_growth_states[l];
    out << "growth " << fmt(g.baseline_layer_confidence) << ' ' << fmt(g.patience_layer) << ' '
        << model.baseline_countdowns[l] << '\n';
    out << "weights\n";
    for (Eigen::Index i = 0; i < layer.visible_units(); ++i) {
      for (Eigen::Index j = 0; j < layer.hidden_units(); ++j) {
        if (j > 0) out << ' ';
        out << fmt(layer.weights(i, j));
      }
      out << '\n';
    }
  }

  out << "events " << model.events.size() << '\n';
  for (const GrowthEvent& e : model.events) {
    out << e.scene_index << ' '
        << (e.kind == GrowthEvent::Kind::NeuronAdded ? "neuron_added" : "layer_added") << ' '
        << e.layer_index << '\n';
  }
  out << "end\n";
  if (!out) throw std::runtime_error("failed writing model stream");
}

void save_model(const GrowingModel& model, const Vocabulary& vocab,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  save_model(model, vocab, out);
}

SavedModel load_model(std::istream& in) {
  LineReader reader(in);

  {
    std::istringstream header(reader.next("header"));
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != kMagic) throw std::runtime_error("not a model file (bad magic)");
    if (version != kFormatVersion) {
      throw std::runtime_error("unsupported model format version " + std::to_string(version));
    }
  }

  GrowingModel model;
  model.variant = variant_from_string(reader.field("variant"));
  model.rng_seed = reader.field_u64("seed");
  model.scenes_seen = reader.field_int("scenes_seen");
  model.options.learning_rate = reader.field_double("learning_rate");
  model.options.patience_neuron = reader.field_double("patience_neuron");
  model.options.patience_layer = reader.field_double("patience_layer");
  model.options.sample_hidden = reader.field_int("sample_hidden") != 0;
  model.options.simplified_confidence = reader.field_int("simplified_confidence") != 0;
  model.options.layer_baseline_settle = static_cast<int>(reader.field_int("layer_baseline_settle"));
  model.options.fresh_weight_sd = reader.field_double("fresh_weight_sd");
  model.options.new_layer_weight_range = reader.field_double("new_layer_weight_range");
  model.options.ripple_row_weight = reader.field_double("ripple_row_weight");

  const long long vocab_size = reader.field_int("vocabulary");
  if (vocab_size < 1) throw std::runtime_error("model file declares an empty vocabulary");
  std::set<std::string> labels;
  for (long long i = 0; i < vocab_size; ++i) {
    if (!labels.insert(reader.next("vocabulary label")).second) {
      throw std::runtime_error("duplicate label in model vocabulary");
    }
  }
  Vocabulary vocab = Vocabulary::from_labels(labels);

  const long long n_layers = reader.field_int("layers");
  if (n_layers < 1) throw std::runtime_error("model file declares no layers");
  for (long long l = 0; l < n_layers; ++l) {
    std::istringstream head(reader.next("layer header"));
    std::string kw_layer, kw_visible, kw_hidden, kw_lr, kw_seed;
    long long index = -1, visible = 0, hidden = 0;
    double lr = 0.0;
    std::uint64_t seed = 0;
    head >> kw_layer >> index >> kw_visible >> visible >> kw_hidden >> hidden >> kw_lr >> lr >>
        kw_seed >> seed;
    if (kw_layer != "layer" || index != l || kw_visible != "visible" || kw_hidden != "hidden" ||
        kw_lr != "learning_rate" || kw_seed != "seed" || visible < 1 || hidden < 1 || !head) {
      throw std::runtime_error("malformed layer header at model line " +
                               std::to_string(reader.line_no()));
    }

    RbmLayer layer;
    layer.weights.resize(visible, hidden);
    layer.learning_rate = lr;
    layer.rng_seed = seed;
    layer.rng.seed(seed);

    {
      std::istringstream conf(reader.field("confidence"));
      ConfidenceState c;
      conf >> c.baseline_model_confidence >> c.partition_at_baseline >> c.patience_neuron;
      if (!conf) throw std::runtime_error("malformed confidence state");
      model.confidence_states.push_back(c);
    }
    {
      std::istringstream growth(reader.field("growth"));
      LayerGrowthState g;
      int countdown = -1;
      growth >> g.baseline_layer_confidence >> g.patience_layer >> countdown;
      if (!growth) throw std::runtime_error("malformed growth state");
      model.layer_growth_states.push_back(g);
      model.baseline_countdowns.push_back(countdown);
    }
    if (reader.next("weights marker") != "weights") {
      throw std::runtime_error("expected 'weights' at model line " +
                               std::to_string(reader.line_no()));
    }
    for (long long i = 0; i < visible; ++i) {
      std::istringstream row(reader.next("weight row"));
      for (long long j = 0; j < hidden; ++j) {
        if (!(row >> layer.weights(i, j))) {
          throw std::runtime_error("short weight row at model line " +
                                   std::to_string(reader.line_no()));
        }
      }
    }
    model.layers.push_back(std::move(layer));
  }

  if (model.vocabulary_size() != vocab.size()) {
    throw std::runtime_error("model bottom layer does not match its vocabulary");
  }
  for (std::size_t l = 1; l < model.layers.size(); ++l) {
    if (model.layers[l].visible_units() != model.layers[l - 1].hidden_units()) {
      throw std::runtime_error("layer dimension chain broken in model file");
    }
  }

  const long long n_events = reader.field_int("events");
  for (long long i = 0; i < n_events; ++i) {
    std::istringstream ev(reader.next("event"));
    GrowthEvent e;
    std::string kind;
    ev >> e.scene_index >> kind >> e.layer_index;
    if (!ev || (kind != "neuron_added" && kind != "layer_added")) {
      throw std::runtime_error("malformed event at model line " + std::to_string(reader.line_no()));
    }
    e.kind = kind == "neuron_added" ? GrowthEvent::Kind::NeuronAdded
                                    : GrowthEvent::Kind::LayerAdded;
    model.events.push_back(e);
  }

  if (reader.next("end marker") != "end") {
    throw std::runtime_error("model file missing end marker");
  }
  return {std::move(model), std::move(vocab)};
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace bmctx

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bmctx/cli/experiment.hpp"
#include "bmctx/data.hpp"
#include "bmctx/model_io.hpp"

using namespace bmctx;
using namespace bmctx::cli;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("bmctx_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static inline int counter = 0;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig tiny_config(const std::filesystem::path& out_dir) {
  ExperimentConfig cfg;
  cfg.out_dir = out_dir.string();
  cfg.seed = 5;
  cfg.synth_contexts = 2;
  cfg.synth_scenes_per_context = 40;
  cfg.synth_vocab_per_context = 6;
  cfg.synth_objects_min = 3;
  cfg.synth_objects_max = 5;
  return cfg;
}

}  // namespace

TEST_CASE("synth writes a deterministic corpus file") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  run_synth(cfg, dir.path / "a.tsv");
  run_synth(cfg, dir.path / "b.tsv");
  CHECK(slurp(dir.path / "a.tsv") == slurp(dir.path / "b.tsv"));

  const Corpus corpus = load_corpus(dir.path / "a.tsv");
  CHECK(corpus.records.size() == 80);
}

TEST_CASE("train emits a byte-stable growth curve and model") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path / "one");
  run_train(cfg);
  cfg.out_dir = (dir.path / "two").string();
  run_train(cfg);

  const std::string curve = slurp(dir.path / "one" / kGrowthCsvName);
  CHECK(curve == slurp(dir.path / "two" / kGrowthCsvName));
  CHECK(slurp(dir.path / "one" / kModelFileName) == slurp(dir.path / "two" / kModelFileName));

  std::istringstream rows(curve);
  std::string header;
  std::getline(rows, header);
  CHECK(header == "scenes_seen,total_contexts,per_layer_contexts,layers");
  long previous = 0;
  std::string line;
  long count = 0;
  while (std::getline(rows, line)) {
    const long seen = std::stol(line.substr(0, line.find(',')));
    CHECK(seen == previous + 1);
    previous = seen;
    ++count;
  }
  CHECK(count == 80);
}

TEST_CASE("train accepts a corpus file and a baseline sized from a grown model") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path / "grown");
  run_synth(cfg, dir.path / "corpus.tsv");
  cfg.corpus = (dir.path / "corpus.tsv").string();
  run_train(cfg);

  ExperimentConfig baseline = cfg;
  baseline.variant = "RBM";
  baseline.out_dir = (dir.path / "baseline").string();
  baseline.baseline_from = (dir.path / "grown" / kModelFileName).string();
  run_train(baseline);
  const SavedModel grown = load_model(dir.path / "grown" / kModelFileName);
  const SavedModel fixed = load_model(dir.path / "baseline" / kModelFileName);
  CHECK(fixed.model.variant == Variant::RBM);
  CHECK(fixed.model.layers[0].hidden_units() == grown.model.layers[0].hidden_units());

  ExperimentConfig stacked = baseline;
  stacked.variant = "stackedRBM";
  stacked.out_dir = (dir.path / "stacked").string();
  stacked.baseline_from.clear();
  stacked.hidden_sizes = "3,2";
  stacked.train_mode = "batch";
  run_train(stacked);
  const SavedModel deep = load_model(dir.path / "stacked" / kModelFileName);
  CHECK(deep.model.layer_count() == 2);

  ExperimentConfig missing = baseline;
  missing.baseline_from.clear();
  CHECK_THROWS_AS(run_train(missing), std::invalid_argument);
}

TEST_CASE("entropy replays the configured stream against a test corpus") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  run_train(cfg);

  ExperimentConfig test_cfg = cfg;
  test_cfg.seed = 6;  // same planted pools, fresh draws
  run_synth(test_cfg, dir.path / "test.tsv");

  cfg.entropy_every = 20;
  run_entropy(cfg, dir.path / kModelFileName, dir.path / "test.tsv");
  const std::string curve = slurp(dir.path / kEntropyCsvName);
  std::istringstream rows(curve);
  std::string header;
  std::getline(rows, header);
  CHECK(header == "scenes_seen,layers,entropy_mean,entropy_per_layer");
  int checkpoints = 0;
  std::string line;
  while (std::getline(rows, line)) ++checkpoints;
  CHECK(checkpoints == 4);  // 20, 40, 60, 80

  run_entropy(cfg, dir.path / kModelFileName, dir.path / "test.tsv");
  CHECK(curve == slurp(dir.path / kEntropyCsvName));
}

TEST_CASE("entropy scores a fixed-size baseline once") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  cfg.variant = "RBM";
  cfg.hidden_sizes = "3";
  run_train(cfg);
  ExperimentConfig test_cfg = cfg;
  test_cfg.seed = 6;
  run_synth(test_cfg, dir.path / "test.tsv");

  run_entropy(cfg, dir.path / kModelFileName, dir.path / "test.tsv");
  std::istringstream rows(slurp(dir.path / kEntropyCsvName));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) ++count;
  CHECK(count == 2);  // header + the final model
}

TEST_CASE("entropy rejects a test corpus with foreign labels") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  run_train(cfg);
  std::ofstream(dir.path / "alien.tsv") << "s1\t\tnot_a_known_label\n";
  CHECK_THROWS_AS(run_entropy(cfg, dir.path / kModelFileName, dir.path / "alien.tsv"),
                  std::invalid_argument);
}

TEST_CASE("reconstruct writes one row per mode and is seed-stable") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  run_train(cfg);
  ExperimentConfig test_cfg = cfg;
  test_cfg.seed = 6;
  run_synth(test_cfg, dir.path / "test.tsv");

  run_reconstruct(cfg, dir.path / kModelFileName, dir.path / "test.tsv");
  const std::string table = slurp(dir.path / kReconstructionCsvName);
  std::istringstream rows(table);
  std::string header, kcp, ucp;
  std::getline(rows, header);
  std::getline(rows, kcp);
  std::getline(rows, ucp);
  CHECK(header == "mode,cd_k,cda_k,cd,cda");
  CHECK(kcp.rfind("KCP,", 0) == 0);
  CHECK(ucp.rfind("UCP,", 0) == 0);

  run_reconstruct(cfg, dir.path / kModelFileName, dir.path / "test.tsv");
  CHECK(table == slurp(dir.path / kReconstructionCsvName));

  ExperimentConfig degenerate = cfg;
  degenerate.alpha = 0.0;
  CHECK_THROWS_AS(run_reconstruct(degenerate, dir.path / kModelFileName, dir.path / "test.tsv"),
                  std::invalid_argument);
}

TEST_CASE("topics prints a rank table from the stored vocabulary") {
  TempDir dir;
  ExperimentConfig cfg = tiny_config(dir.path);
  run_train(cfg);
  std::ostringstream out;
  run_topics(dir.path / kModelFileName, 0, 3, out);
  std::istringstream rows(out.str());
  std::string header, first;
  std::getline(rows, header);
  std::getline(rows, first);
  CHECK(header.rfind("rank\thidden_0", 0) == 0);
  CHECK(first.rfind("1\t", 0) == 0);
  CHECK(first.find("_obj") != std::string::npos);
}

TEST_CASE("config files feed every key with command-line override") {
  TempDir dir;
  std::ofstream(dir.path / "exp.cfg") << "# comment\n"
                                      << "variant = iRBM\n"
                                      << "seed=9\n"
                                      << "synth_contexts=3\n"
                                      << "out_dir=" << (dir.path / "from_file").string() << "\n";
  ExperimentConfig cfg;
  load_config_file(dir.path / "exp.cfg", cfg,
                   [](const std::string& key) { return key == "seed"; });
  CHECK(cfg.variant == "iRBM");
  CHECK(cfg.seed == 42);  // overridden key keeps its command-line value
  CHECK(cfg.synth_contexts == 3);
  CHECK(cfg.out_dir == (dir.path / "from_file").string());

  std::ofstream(dir.path / "bad.cfg") << "no_such_key=1\n";
  CHECK_THROWS_AS(load_config_file(dir.path / "bad.cfg", cfg, nullptr), std::runtime_error);
}

#ifdef BMCTX_CLI_EXE
TEST_CASE("the bmctx binary wires the subcommands end to end") {
  TempDir dir;
  const std::string exe = BMCTX_CLI_EXE;
  auto run = [&](const std::string& args) {
    return std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
  };
  const std::string corpus = (dir.path / "c.tsv").string();
  const std::string out_dir = (dir.path / "run").string();
  CHECK(run("synth --out " + corpus +
            " --synth_contexts 2 --synth_scenes_per_context 20 --synth_vocab_per_context 6 "
            "--synth_objects_min 3 --synth_objects_max 5 --seed 4") == 0);
  CHECK(run("train --corpus " + corpus + " --out_dir " + out_dir + " --seed 4") == 0);
  CHECK(run("topics --model " + out_dir + "/model.bm --k 3") == 0);
  CHECK(run("train --corpus /nonexistent.tsv --out_dir " + out_dir) != 0);
  CHECK(run("nonsense") != 0);
}
#endif

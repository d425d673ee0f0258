// Copyright 2026 The magnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--only <name>` runs a single criterion.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "magnet/labelgraph.hpp"
#include "magnet/metrics.hpp"
#include "magnet/pipeline.hpp"
#include "synthetic.hpp"

using namespace magnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("magnet_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t fields(const std::string& line) {
  return 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
}

// Small configuration shared by the training criteria.
MagnetConfig small_config(std::uint64_t seed) {
  MagnetConfig c;
  c.vocab_size = 200;
  c.embed_dim = 16;
  c.hidden = 16;
  c.heads = 2;
  c.dropout = 0.0;
  c.batch_size = 8;
  c.lr = 0.01;
  c.max_tokens = 50;
  c.patience = 0;
  c.seed = seed;
  return c;
}

Outcome gradient_suite() {
  const Stopwatch clock;
  double worst = 0;
  std::string worst_name;
  std::size_t groups = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto toy = testing::make_toy(4, seed);
    for (const auto& e : testing::model_gradient_errors(toy.model, toy.docs)) {
      ++groups;
      if (e.relative_error >= worst) {
        worst = e.relative_error;
        worst_name = e.name;
      }
    }
  }
  const double t = clock.seconds();
  return {worst < 1e-4 && t < 60.0,
          std::to_string(groups) + " parameter groups over 3 toys, max relative error " +
              fmt("%.2e", worst) + " (" + worst_name + "), " + fmt("%.1f", t) +
              " s; need < 1e-4 and < 60 s"};
}

Outcome overfit() {
  const Stopwatch clock;
  MagnetConfig cfg = small_config(1);
  cfg.epochs = 200;
  const auto docs = testing::keyword_corpus(64, 1);
  PreparedData data = prepare_data(cfg, docs, docs, {});
  MagnetModel model = build_model(data);
  const TrainRun run = train(model, data.corpus.train, data.corpus.train);
  const EvalResult e = evaluate(model, data.corpus.train);
  const double t = clock.seconds();
  return {e.scores.f1 >= 0.95 && e.hamming_loss <= 0.05 && t < 300.0,
          "64 docs, 5 labels: train micro-F1 " + fmt("%.4f", e.scores.f1) + ", Hamming loss " +
              fmt("%.4f", e.hamming_loss) + " at epoch " + std::to_string(run.best_epoch) + ", " +
              fmt("%.1f", t) + " s; need >= 0.95, <= 0.05, < 300 s"};
}

Outcome correlation() {
  const Stopwatch clock;
  std::size_t wins = 0;
  std::string per_seed;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto split = testing::correlated_corpus(128, 100, 1000 + s);
    auto test_f1 = [&](bool full) {
      MagnetConfig cfg = small_config(s);
      cfg.epochs = 60;
      if (full) {
        cfg.adjacency = AdjacencyInit::kXavier;
        cfg.adjacency_trainable = true;
        cfg.layer_mode = LayerMode::kGat;
      } else {
        cfg.adjacency = AdjacencyInit::kIdentity;
        cfg.adjacency_trainable = false;
        cfg.layer_mode = LayerMode::kGcn;
      }
      PreparedData data = prepare_data(cfg, split.train, split.test, {});
      MagnetModel model = build_model(data);
      TrainOptions opts;
      opts.restore_best = false;
      train(model, data.corpus.train, data.corpus.test, opts);
      return evaluate(model, data.corpus.test).scores.f1;
    };
    const double full = test_f1(true), base = test_f1(false);
    wins += full > base ? 1 : 0;
    per_seed += (s > 1 ? ", " : "") + fmt("%.4f", full) + " vs " + fmt("%.4f", base);
  }
  return {wins >= 4, "full model beat the identity-frozen convolution baseline in " +
                         std::to_string(wins) + "/5 seeds (test micro-F1 " + per_seed + ", " +
                         fmt("%.0f", clock.seconds()) + " s); need >= 4/5"};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 16);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng), l = size(rng);
    LabelMatrix y(n, l), z(n, l);
    std::bernoulli_distribution by(density(rng)), bz(density(rng));
    for (auto& c : y.cells) c = by(rng);
    for (auto& c : z.cells) c = bz(rng);
    std::uint64_t tp = 0, fp = 0, fn = 0, wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        tp += y(i, j) && z(i, j);
        fp += !y(i, j) && z(i, j);
        fn += y(i, j) && !z(i, j);
        wrong += y(i, j) != z(i, j);
      }
    }
    const double f1 = tp + fp + fn == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
    const double hl = static_cast<double>(wrong) / static_cast<double>(n * l);
    mismatches += micro_f1(confusion_totals(y, z)) != f1 || hamming_loss(y, z) != hl;
  }
  ConfusionTotals hand;
  hand.tp = {2, 1};
  hand.fp = {1, 0};
  hand.fn = {0, 1};
  const double f1 = micro_f1(hand);
  LabelMatrix y(2, 3), z(2, 3);
  y.cells = {1, 0, 0, 0, 1, 1};
  z.cells = {1, 0, 1, 0, 1, 1};
  const double hl = hamming_loss(y, z);
  return {mismatches == 0 && f1 == 0.75 && hl == 1.0 / 6.0,
          std::to_string(mismatches) + "/1000 random pairs differ from brute force; hand examples " +
              fmt("%.17g", f1) + " and " + fmt("%.17g", hl)};
}

Outcome adjacency_initializers() {
  bool identity_ok = true, xavier_ok = true;
  double widest = 0;
  Rng rng(3);
  for (std::size_t n : {1, 3, 5, 40}) {
    identity_ok = identity_ok && init_adjacency(AdjacencyInit::kIdentity, n, nullptr, rng) == Tensor::identity(n);
    const double bound = std::sqrt(6.0) / std::sqrt(2.0 * static_cast<double>(n));
    const Tensor xavier = init_adjacency(AdjacencyInit::kXavier, n, nullptr, rng);
    for (double x : xavier.data()) {
      xavier_ok = xavier_ok && std::abs(x) <= bound;
      widest = std::max(widest, std::abs(x) / bound);
    }
  }
  const LabelSpace labels({"a", "b", "c"});
  std::vector<Document> docs(3);
  docs[0].label_ids = {0, 1};
  docs[1].label_ids = {0, 2};
  docs[2].label_ids = {0};
  const CooccurrenceStats stats = build_cooccurrence(docs, labels);
  const Tensor c = init_adjacency(AdjacencyInit::kCooccurrence, 3, &stats, rng);
  const bool cooc_ok = c == Tensor::from_rows({{1, 1.0 / 3, 1.0 / 3}, {1, 1, 0}, {1, 0, 1}});
  auto word = [](bool ok) { return ok ? "exact" : "differs"; };
  return {identity_ok && xavier_ok && cooc_ok,
          std::string("identity ") + word(identity_ok) + "; Xavier " +
              (xavier_ok ? "inside" : "outside") + " +-sqrt(6)/sqrt(2n) for n in {1,3,5,40} (max |x|/bound " +
              fmt("%.3f", widest) + "); co-occurrence toy " + word(cooc_ok)};
}

Outcome equivariance() {
  double worst = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto toy = testing::make_toy(6, 100 + trial);
    MagnetModel& m = toy.model;
    const std::size_t n = m.num_labels();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(500 + trial);
    rng.shuffle(perm);

    const Tensor& labels = m.params().label_embeddings.value;
    const Tensor& adj = m.params().adjacency.value;
    Tensor pl(labels.rows(), labels.cols()), pa(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < labels.cols(); ++k) pl(i, k) = labels(perm[i], k);
      for (std::size_t j = 0; j < n; ++j) pa(i, j) = adj(perm[i], perm[j]);
    }
    Graph g;
    std::vector<LayerVars> layers;
    for (auto& l : m.params().layers) layers.push_back(bind_layer(g, l, LayerMode::kGat, true));
    const Var h = stack_forward(g, g.constant(labels), g.constant(adj), layers, LayerMode::kGat);
    const Var hp = stack_forward(g, g.constant(pl), g.constant(pa), layers, LayerMode::kGat);
    const Tensor hv = g.value(h), hpv = g.value(hp);
    const auto b = m.bind_frozen(g);
    const Var f = m.document_feature(g, b, toy.docs[0].token_ids, Mode::kEval, nullptr);
    const Tensor z = g.value(predict_logits(g, f, h));
    const Tensor zp = g.value(predict_logits(g, f, hp));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < hv.cols(); ++k) worst = std::max(worst, std::abs(hpv(i, k) - hv(perm[i], k)));
      worst = std::max(worst, std::abs(zp[i] - z[perm[i]]));
    }
  }
  return {worst <= 1e-10, "20 label permutations, max deviation " + fmt("%.2e", worst) +
                              " over label features and logits; need <= 1e-10"};
}

Outcome determinism_persistence() {
  MagnetConfig cfg = small_config(7);
  cfg.epochs = 8;
  cfg.dropout = 0.3;
  const auto train_docs = testing::keyword_corpus(48, 70);
  const auto test_docs = testing::keyword_corpus(24, 71);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const TrainOutcome ra = train_to_directory(cfg, train_docs, test_docs, {}, a);
  train_to_directory(cfg, train_docs, test_docs, {}, b);
  const std::string la = slurp(a / kMetricsFile), lb = slurp(b / kMetricsFile);
  const bool logs_equal = !la.empty() && la == lb;

  const MagnetModel loaded = load_model(a / kCheckpointFile);
  const auto docs = encode_for_model(loaded, test_docs);
  bool preds_equal = true;
  const Tensor h1 = ra.model.label_feature_values(), h2 = loaded.label_feature_values();
  for (const auto& d : docs) {
    const Tensor z1 = ra.model.logits(d.token_ids, h1), z2 = loaded.logits(d.token_ids, h2);
    for (std::size_t k = 0; k < z1.size(); ++k) {
      preds_equal = preds_equal && std::bit_cast<std::uint64_t>(z1[k]) == std::bit_cast<std::uint64_t>(z2[k]);
    }
  }
  return {logs_equal && preds_equal,
          "two same-seed runs wrote " + std::string(logs_equal ? "identical" : "different") + " " +
              std::to_string(split_lines(la).size()) + "-line metric logs; reloaded checkpoint logits " +
              (preds_equal ? "bit-identical" : "differ") + " on " + std::to_string(docs.size()) +
              " documents"};
}

Outcome ablation_harness() {
  MagnetConfig cfg = small_config(3);
  cfg.epochs = 15;
  const auto train_docs = testing::keyword_corpus(64, 80);
  const auto test_docs = testing::keyword_corpus(32, 81);
  bool ok = true;
  std::string notes;
  for (AblationKind kind : {AblationKind::kAdjacencyInit, AblationKind::kGatVsGcn}) {
    const fs::path dir = scratch(std::string(to_string(kind)));
    const auto rows = run_ablation(kind, cfg, train_docs, test_docs, {}, dir);
    const auto table = split_lines(slurp(dir / "ablation.tsv"));
    ok = ok && table.size() == rows.size() + 1;
    for (const auto& line : table) ok = ok && fields(line) == 10;
    for (const auto& r : rows) {
      ok = ok && std::isfinite(r.final_train_loss) && std::isfinite(r.final_test_loss);
      const auto series = split_lines(slurp(dir / ("series_" + r.variant + ".tsv")));
      ok = ok && series.size() == 1 + 2 * r.epochs_run;
      for (const auto& line : series) ok = ok && fields(line) == 5;
      notes += (notes.empty() ? "" : ", ") + r.variant + " F1 " + fmt("%.3f", r.final_test_micro_f1) +
               " loss " + fmt("%.3f", r.final_test_loss);
    }
  }
  return {ok, "both sweeps wrote well-formed tables and series: " + notes};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"gradient-suite", gradient_suite},
      {"overfit", overfit},
      {"correlation-learnability", correlation},
      {"metric-oracles", metric_oracles},
      {"adjacency-initializers", adjacency_initializers},
      {"equivariance", equivariance},
      {"determinism-persistence", determinism_persistence},
      {"ablation-harness", ablation_harness},
  };
  std::string only;
  if (argc == 3 && std::string(argv[1]) == "--only") {
    only = argv[2];
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--only <criterion>]\n", argv[0]);
    return 64;
  }
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 64;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}

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


#include <charconv>
#include <cmath>
#include <numeric>

#include "magnet/errors.hpp"
#include "magnet/rng.hpp"
#include "magnet/trainer.hpp"

namespace magnet {

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

double doc_loss(const Tensor& logits, const Document& doc, std::size_t n) {
  Graph g;
  return g.value(bce_loss(g, g.constant_ref(logits), label_vector(doc, n))).item();
}

std::vector<Tensor> snapshot(const MagnetParams& params) {
  std::vector<Tensor> out;
  for (const Parameter* p : params.all()) out.push_back(p->value);
  return out;
}

}  // namespace

EvalResult evaluate(const MagnetModel& model, std::span<const Document> docs) {
  if (docs.empty()) throw InvalidArgumentError("evaluate: no documents");
  const std::size_t n = model.num_labels();
  const Tensor h = model.label_feature_values();
  EvalResult r;
  r.num_docs = docs.size();
  r.targets = LabelMatrix(0, n);
  r.predictions = LabelMatrix(0, n);
  double total = 0.0;
  for (const Document& doc : docs) {
    const Tensor z = model.logits(doc.token_ids, h);
    total += doc_loss(z, doc, n);
    append_binarized(r.predictions, z);
    append_binarized(r.targets, label_vector(doc, n));
  }
  r.loss = total / static_cast<double>(docs.size());
  r.scores = micro_scores(confusion_totals(r.targets, r.predictions), &r.degenerate);
  r.hamming_loss = hamming_loss(r.targets, r.predictions);
  return r;
}

std::string to_json_line(const EpochRecord& r) {
  return "{\"epoch\":" + std::to_string(r.epoch) + ",\"split\":\"" + r.split +
         "\",\"loss\":" + format_double(r.loss) + ",\"micro_f1\":" + format_double(r.micro_f1) +
         ",\"hamming_loss\":" + format_double(r.hamming_loss) + "}";
}

TrainRun train(MagnetModel& model, std::span<const Document> train_docs,
               std::span<const Document> eval_docs, const TrainOptions& options) {
  const MagnetConfig& cfg = model.config();
  cfg.validate();
  if (train_docs.empty()) throw InvalidArgumentError("train: no training documents");
  if (eval_docs.empty()) throw InvalidArgumentError("train: no evaluation documents");

  TrainRun run;
  run.config = cfg;
  run.seed = cfg.seed;
  run.best_checkpoint = options.checkpoint_path;

  Rng order_rng(cfg.seed ^ fnv1a("batches"));
  Rng dropout_rng(cfg.seed ^ fnv1a("dropout"));
  Adam adam(cfg.lr);
  auto params = model.params().all();
  std::vector<Tensor> best_values;
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train_docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const Document*> batch;

  auto record = [&](std::size_t epoch, const char* split, const EvalResult& e) {
    EpochRecord r{epoch, split, e.loss, e.scores.f1, e.hamming_loss};
    run.history.push_back(r);
    if (options.on_record) options.on_record(r);
  };

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(&train_docs[order[k]]);
      ++run.steps;
      try {
        model.params().zero_grad();
        const double loss = model.accumulate_batch_gradients(batch, Mode::kTrain, &dropout_rng);
        if (!std::isfinite(loss)) throw NumericError("loss is not finite");
        clip_gradients(params, cfg.clip_norm);
        adam.step(params);
      } catch (const NumericError& e) {
        throw NumericError("training diverged at step " + std::to_string(run.steps) + " (epoch " +
                           std::to_string(epoch) + "): " + e.what());
      }
    }
    run.epochs_run = epoch;

    const EvalResult on_train = evaluate(model, train_docs);
    const EvalResult on_eval = evaluate(model, eval_docs);
    record(epoch, "train", on_train);
    record(epoch, "test", on_eval);

    if (on_eval.scores.f1 > run.best_micro_f1) {
      run.best_micro_f1 = on_eval.scores.f1;
      run.best_epoch = epoch;
      since_best = 0;
      if (options.restore_best) best_values = snapshot(model.params());
      if (!options.checkpoint_path.empty()) {
        const auto& const_params = std::as_const(model.params()).all();
        save_checkpoint(options.checkpoint_path, const_params);
      }
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      run.stopped_early = true;
      break;
    }
  }

  if (options.restore_best && !best_values.empty()) {
    for (std::size_t s = 0; s < params.size(); ++s) params[s]->value = std::move(best_values[s]);
  }
  return run;
}

}  // namespace magnet

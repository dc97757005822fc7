#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqain/normalize.hpp"
#include "vqain/record.hpp"

namespace vqain {

// VQAv2 consensus accuracy. With exactly ten human answers: mean over the
// ten leave-one-out 9-answer subsets of min(matches/3, 1). With any other
// count the subset averaging is skipped and min(matches/3, 1) is returned
// directly. Matching happens after normalize_answer on both sides.
double vqa_accuracy(std::string_view pred, const std::vector<std::string>& human_answers,
                    const NormTable& table = NormTable::builtin());

// Fraction of exact matches after normalization. Sizes must agree.
double top1_accuracy(const std::vector<std::string>& preds,
                     const std::vector<std::string>& refs,
                     const NormTable& table = NormTable::builtin());

// Corpus-level BLEU-4: geometric mean of modified n-gram precisions over the
// n in 1..4 that have at least one hypothesis n-gram, times the brevity
// penalty exp(min(0, 1 - r/c)). Any zero precision zeroes the score.
// r uses the per-sentence best-match reference length (ties -> shorter).
double bleu4(const std::vector<std::string>& hyps,
             const std::vector<std::vector<std::string>>& refs);

// Plain CIDEr (no CIDEr-D length penalty): per image, cosine similarity of
// TF-IDF n-gram vectors averaged over references, mean over n = 1..4, x10.
// IDF is computed over the reference sets being evaluated; a single-image
// corpus degenerates to all-zero IDF (flagged via the report notes).
std::vector<double> cider_per_image(const std::vector<std::string>& hyps,
                                    const std::vector<std::vector<std::string>>& refs);
double cider(const std::vector<std::string>& hyps,
             const std::vector<std::vector<std::string>>& refs);

// METEOR, exact-match stage only: lowercase unigram alignment maximizing
// matches then minimizing chunks; Fmean = P*R/(0.9P + 0.1R);
// penalty = 0.5*(chunks/m)^3. Multiple references take the per-sentence max.
double meteor_sentence(const std::string& hyp, const std::vector<std::string>& refs);
double meteor(const std::vector<std::string>& hyps,
              const std::vector<std::vector<std::string>>& refs);

struct Prediction {
  std::string id;
  std::string text;
};

std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& p);

struct EvalOptions {
  // Metric names: bleu4, cider, vqa_acc, top1, meteor, det_iou.
  // Empty selects every metric whose task appears in the references.
  std::vector<std::string> metrics;
  bool strict = false;
  double iou_threshold = 0.5;
};

struct DatasetScores {
  std::map<std::string, double> scores;
  uint64_t evaluated = 0;
};

struct MetricReport {
  std::map<std::string, double> overall;
  std::map<std::string, DatasetScores> per_dataset;
  uint64_t evaluated = 0;
  uint64_t orphaned = 0;     // predictions without a reference id
  uint64_t missing = 0;      // references without a prediction
  uint64_t unparseable_boxes = 0;
  std::string normalization_hash;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Joins predictions to references by id and routes every record to the
// metric of its task: Caption -> bleu4+cider, Vqa -> vqa_acc,
// Recognition -> top1, Referring -> meteor, Detection -> det_iou.
MetricReport evaluate(const std::vector<VqaInRecord>& refs,
                      const std::vector<Prediction>& preds,
                      const EvalOptions& opts = {},
                      const NormTable& table = NormTable::builtin());

std::string format_report_table(const MetricReport& report);

}  // namespace vqain

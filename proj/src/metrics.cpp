#include "vqain/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vqain/error.hpp"
#include "vqain/io.hpp"

using json = nlohmann::json;

namespace vqain {

double vqa_accuracy(std::string_view pred, const std::vector<std::string>& human_answers,
                    const NormTable& table) {
  if (human_answers.empty()) throw DataError("vqa_accuracy needs at least one human answer");
  const std::string np = normalize_answer(pred, table);
  std::vector<int> match(human_answers.size());
  for (size_t i = 0; i < human_answers.size(); ++i)
    match[i] = normalize_answer(human_answers[i], table) == np ? 1 : 0;

  if (human_answers.size() == 10) {
    // Integer aggregation: min(k/3, 1) == min(k, 3)/3, so one final division
    // keeps the closed form and the subset enumeration bit-identical.
    int total = 0;
    for (size_t drop = 0; drop < 10; ++drop) {
      int k = 0;
      for (size_t i = 0; i < 10; ++i)
        if (i != drop) k += match[i];
      total += std::min(k, 3);
    }
    return static_cast<double>(total) / 30.0;
  }
  int k = 0;
  for (int m : match) k += m;
  return static_cast<double>(std::min(k, 3)) / 3.0;
}

double top1_accuracy(const std::vector<std::string>& preds,
                     const std::vector<std::string>& refs, const NormTable& table) {
  if (preds.size() != refs.size())
    throw DataError("top1_accuracy: prediction/reference size mismatch");
  if (preds.empty()) throw DataError("top1_accuracy: empty corpus");
  size_t correct = 0;
  for (size_t i = 0; i < preds.size(); ++i)
    if (normalize_answer(preds[i], table) == normalize_answer(refs[i], table)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

namespace {

constexpr int kMaxOrder = 4;

// n-gram key: tokens joined on an unprintable separator.
std::string ngram_key(const std::vector<std::string>& toks, size_t start, int n) {
  std::string key;
  for (int k = 0; k < n; ++k) {
    if (k) key += '\x1f';
    key += toks[start + k];
  }
  return key;
}

using CountMap = std::unordered_map<std::string, double>;

CountMap ngram_counts(const std::vector<std::string>& toks, int n) {
  CountMap counts;
  if (static_cast<int>(toks.size()) >= n)
    for (size_t i = 0; i + n <= toks.size(); ++i) counts[ngram_key(toks, i, n)] += 1.0;
  return counts;
}

std::string ascii_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

double bleu4(const std::vector<std::string>& hyps,
             const std::vector<std::vector<std::string>>& refs) {
  if (hyps.empty()) throw DataError("bleu4: empty corpus");
  if (hyps.size() != refs.size()) throw DataError("bleu4: hypothesis/reference size mismatch");

  double matched[kMaxOrder + 1] = {0};
  double total[kMaxOrder + 1] = {0};
  double hyp_len = 0, ref_len = 0;

  for (size_t i = 0; i < hyps.size(); ++i) {
    const auto h = whitespace_tokens(hyps[i]);
    if (refs[i].empty()) throw DataError("bleu4: sentence without references");
    hyp_len += static_cast<double>(h.size());

    // Best-match reference length: closest to the hypothesis, ties go short.
    size_t best = 0;
    bool first = true;
    for (const auto& r : refs[i]) {
      size_t len = whitespace_tokens(r).size();
      auto dist = [&](size_t l) {
        return l > h.size() ? l - h.size() : h.size() - l;
      };
      if (first || dist(len) < dist(best) || (dist(len) == dist(best) && len < best)) {
        best = len;
        first = false;
      }
    }
    ref_len += static_cast<double>(best);

    for (int n = 1; n <= kMaxOrder; ++n) {
      if (static_cast<int>(h.size()) >= n)
        total[n] += static_cast<double>(h.size() - n + 1);
      auto hyp_counts = ngram_counts(h, n);
      if (hyp_counts.empty()) continue;
      CountMap ref_max;
      for (const auto& r : refs[i])
        for (const auto& [key, cnt] : ngram_counts(whitespace_tokens(r), n)) {
          auto& v = ref_max[key];
          v = std::max(v, cnt);
        }
      for (const auto& [key, cnt] : hyp_counts) {
        auto it = ref_max.find(key);
        if (it != ref_max.end()) matched[n] += std::min(cnt, it->second);
      }
    }
  }

  double log_sum = 0;
  int n_eff = 0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    if (total[n] == 0) continue;  // orders with no hypothesis n-grams are skipped
    if (matched[n] == 0) return 0.0;
    log_sum += std::log(matched[n] / total[n]);
    ++n_eff;
  }
  if (n_eff == 0 || hyp_len == 0) return 0.0;
  double bp = std::exp(std::min(0.0, 1.0 - ref_len / hyp_len));
  return bp * std::exp(log_sum / n_eff);
}

namespace {

struct TfIdfVec {
  CountMap weights[kMaxOrder + 1];
  double norm[kMaxOrder + 1] = {0};
};

TfIdfVec tfidf_vector(const std::vector<std::string>& toks, const CountMap& df,
                      double log_num_docs) {
  TfIdfVec v;
  for (int n = 1; n <= kMaxOrder; ++n) {
    for (const auto& [key, tf] : ngram_counts(toks, n)) {
      auto it = df.find(key);
      double d = it == df.end() ? 0.0 : it->second;
      double w = tf * (log_num_docs - std::log(std::max(1.0, d)));
      v.weights[n][key] = w;
      v.norm[n] += w * w;
    }
    v.norm[n] = std::sqrt(v.norm[n]);
  }
  return v;
}

double cosine(const CountMap& a, const CountMap& b, double na, double nb) {
  if (na == 0 || nb == 0) return 0.0;
  double dot = 0;
  const CountMap& small = a.size() <= b.size() ? a : b;
  const CountMap& large = a.size() <= b.size() ? b : a;
  for (const auto& [key, w] : small) {
    auto it = large.find(key);
    if (it != large.end()) dot += w * it->second;
  }
  return dot / (na * nb);
}

}  // namespace

std::vector<double> cider_per_image(const std::vector<std::string>& hyps,
                                    const std::vector<std::vector<std::string>>& refs) {
  if (hyps.empty()) throw DataError("cider: empty corpus");
  if (hyps.size() != refs.size()) throw DataError("cider: hypothesis/reference size mismatch");

  // Document frequency: one document per image's reference set.
  CountMap df;
  for (const auto& image_refs : refs) {
    std::set<std::string> seen;
    for (const auto& r : image_refs) {
      auto toks = whitespace_tokens(r);
      for (int n = 1; n <= kMaxOrder; ++n)
        for (const auto& [key, _] : ngram_counts(toks, n)) seen.insert(key);
    }
    for (const auto& key : seen) df[key] += 1.0;
  }
  const double log_num_docs = std::log(static_cast<double>(hyps.size()));

  std::vector<double> scores;
  scores.reserve(hyps.size());
  for (size_t i = 0; i < hyps.size(); ++i) {
    if (refs[i].empty()) throw DataError("cider: sentence without references");
    TfIdfVec hv = tfidf_vector(whitespace_tokens(hyps[i]), df, log_num_docs);
    double acc = 0;
    for (const auto& r : refs[i]) {
      TfIdfVec rv = tfidf_vector(whitespace_tokens(r), df, log_num_docs);
      for (int n = 1; n <= kMaxOrder; ++n)
        acc += cosine(hv.weights[n], rv.weights[n], hv.norm[n], rv.norm[n]);
    }
    scores.push_back(10.0 * acc / (kMaxOrder * static_cast<double>(refs[i].size())));
  }
  return scores;
}

double cider(const std::vector<std::string>& hyps,
             const std::vector<std::vector<std::string>>& refs) {
  auto scores = cider_per_image(hyps, refs);
  double sum = 0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

namespace {

// Alignment search for the METEOR chunk count: among alignments with the
// maximum number of exact unigram matches, find the minimum number of
// chunks (maximal runs that are contiguous in both sentences).
struct ChunkSearch {
  const std::vector<std::string>& hyp;
  const std::vector<std::string>& ref;
  std::vector<int> suffix_max;  // max matches achievable from hyp position i
  std::vector<char> used;
  int target_matches = 0;
  int best_chunks = 0;
  long budget = 2'000'000;

  ChunkSearch(const std::vector<std::string>& h, const std::vector<std::string>& r)
      : hyp(h), ref(r) {
    std::unordered_map<std::string, int> ref_counts;
    for (const auto& w : ref) ++ref_counts[w];

    // target = sum over words of min(hyp count, ref count)
    std::unordered_map<std::string, int> avail = ref_counts;
    for (const auto& w : hyp) {
      auto it = avail.find(w);
      if (it != avail.end() && it->second > 0) {
        --it->second;
        ++target_matches;
      }
    }

    suffix_max.assign(hyp.size() + 1, 0);
    avail = ref_counts;
    std::vector<int> taken(hyp.size(), 0);
    // recompute suffix capacity right-to-left with full ref availability
    for (size_t i = hyp.size(); i-- > 0;) {
      std::unordered_map<std::string, int> cap = ref_counts;
      int total = 0;
      for (size_t k = i; k < hyp.size(); ++k) {
        auto it = cap.find(hyp[k]);
        if (it != cap.end() && it->second > 0) {
          --it->second;
          ++total;
        }
      }
      suffix_max[i] = total;
    }
  }

  // Greedy alignment used to seed the bound: prefer extending the current
  // chunk, otherwise take the leftmost free occurrence.
  int greedy_chunks() {
    std::vector<char> taken(ref.size(), 0);
    std::unordered_map<std::string, int> avail;
    for (const auto& w : ref) ++avail[w];
    int chunks = 0;
    int prev_j = -2;
    bool prev_matched = false;
    for (size_t i = 0; i < hyp.size(); ++i) {
      auto it = avail.find(hyp[i]);
      if (it == avail.end() || it->second == 0) {
        prev_matched = false;
        continue;
      }
      int j = -1;
      if (prev_matched && prev_j + 1 < static_cast<int>(ref.size()) &&
          !taken[prev_j + 1] && ref[prev_j + 1] == hyp[i]) {
        j = prev_j + 1;
      } else {
        for (size_t k = 0; k < ref.size(); ++k)
          if (!taken[k] && ref[k] == hyp[i]) {
            j = static_cast<int>(k);
            break;
          }
      }
      taken[j] = 1;
      --it->second;
      if (!(prev_matched && j == prev_j + 1)) ++chunks;
      prev_j = j;
      prev_matched = true;
    }
    return chunks;
  }

  void dfs(size_t i, int matched, int chunks, int prev_j, bool prev_matched) {
    if (--budget < 0) return;
    if (chunks >= best_chunks) return;
    if (matched + suffix_max[i] < target_matches) return;
    if (i == hyp.size()) {
      if (matched == target_matches) best_chunks = chunks;
      return;
    }
    for (size_t j = 0; j < ref.size(); ++j) {
      if (used[j] || ref[j] != hyp[i]) continue;
      bool contiguous = prev_matched && static_cast<int>(j) == prev_j + 1;
      used[j] = 1;
      dfs(i + 1, matched + 1, chunks + (contiguous ? 0 : 1), static_cast<int>(j), true);
      used[j] = 0;
    }
    dfs(i + 1, matched, chunks, prev_j, false);
  }

  // Returns (matches, chunks).
  std::pair<int, int> run() {
    if (target_matches == 0) return {0, 0};
    best_chunks = greedy_chunks();
    used.assign(ref.size(), 0);
    dfs(0, 0, 0, -2, false);
    return {target_matches, best_chunks};
  }
};

double meteor_single(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  ChunkSearch search(hyp, ref);
  auto [m, chunks] = search.run();
  if (m == 0) return 0.0;
  double p = static_cast<double>(m) / static_cast<double>(hyp.size());
  double r = static_cast<double>(m) / static_cast<double>(ref.size());
  double fmean = p * r / (0.9 * p + 0.1 * r);
  double frag = static_cast<double>(chunks) / static_cast<double>(m);
  double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

}  // namespace

double meteor_sentence(const std::string& hyp, const std::vector<std::string>& refs) {
  if (refs.empty()) throw DataError("meteor: sentence without references");
  auto h = whitespace_tokens(ascii_lower(hyp));
  double best = 0.0;
  for (const auto& r : refs)
    best = std::max(best, meteor_single(h, whitespace_tokens(ascii_lower(r))));
  return best;
}

double meteor(const std::vector<std::string>& hyps,
              const std::vector<std::vector<std::string>>& refs) {
  if (hyps.empty()) throw DataError("meteor: empty corpus");
  if (hyps.size() != refs.size()) throw DataError("meteor: hypothesis/reference size mismatch");
  double sum = 0;
  for (size_t i = 0; i < hyps.size(); ++i) sum += meteor_sentence(hyps[i], refs[i]);
  return sum / static_cast<double>(hyps.size());
}

std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& p) {
  std::vector<Prediction> preds;
  for_each_line(p, [&](std::string_view line, size_t lineno) {
    if (line.empty()) return;
    json j;
    try {
      j = json::parse(line);
      preds.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
    } catch (const json::exception& e) {
      throw DataError(p.string() + ":" + std::to_string(lineno) +
                      ": invalid prediction: " + e.what());
    }
  });
  return preds;
}

namespace {

struct MetricDef {
  const char* name;
  TaskKind task;
};

constexpr MetricDef kMetricDefs[] = {
    {"bleu4", TaskKind::Caption},   {"cider", TaskKind::Caption},
    {"vqa_acc", TaskKind::Vqa},     {"top1", TaskKind::Recognition},
    {"meteor", TaskKind::Referring}, {"det_iou", TaskKind::Detection},
};

struct JoinedRecord {
  const VqaInRecord* ref;
  const std::string* pred;
};

// References grouped for multi-reference metrics: captions share a group per
// (dataset, image); referring expressions per (dataset, image, box).
std::string caption_group_key(const VqaInRecord& r) {
  return r.source_dataset + '\x1f' + r.image;
}

std::string referring_group_key(const VqaInRecord& r) {
  return r.source_dataset + '\x1f' + r.image + '\x1f' +
         (r.bbox ? render_bbox_text(*r.bbox) : std::string());
}

std::string join_ids(const std::vector<std::string>& ids, size_t cap = 20) {
  std::string out;
  for (size_t i = 0; i < ids.size() && i < cap; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > cap) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

MetricReport evaluate(const std::vector<VqaInRecord>& refs,
                      const std::vector<Prediction>& preds, const EvalOptions& opts,
                      const NormTable& table) {
  MetricReport report;
  report.normalization_hash = table.sha256;

  std::unordered_map<std::string, const VqaInRecord*> by_id;
  for (const auto& r : refs) {
    if (!by_id.emplace(r.id, &r).second)
      throw DataError("duplicate reference id: " + r.id);
  }

  std::unordered_map<std::string, const std::string*> joined;  // ref id -> pred text
  std::vector<std::string> orphan_ids;
  for (const auto& p : preds) {
    auto it = by_id.find(p.id);
    if (it == by_id.end()) {
      ++report.orphaned;
      orphan_ids.push_back(p.id);
      continue;
    }
    if (!joined.emplace(p.id, &p.text).second)
      throw DataError("duplicate prediction id: " + p.id);
  }

  std::vector<std::string> missing_ids;
  for (const auto& r : refs)
    if (!joined.count(r.id)) {
      ++report.missing;
      missing_ids.push_back(r.id);
    }

  if (opts.strict) {
    if (!missing_ids.empty())
      throw DataError("strict mode: missing predictions for ids: " + join_ids(missing_ids));
    if (!orphan_ids.empty())
      throw DataError("strict mode: orphan predictions for ids: " + join_ids(orphan_ids));
  }

  std::set<TaskKind> tasks_present;
  for (const auto& r : refs) tasks_present.insert(r.task);

  std::vector<MetricDef> selected;
  if (opts.metrics.empty()) {
    for (const auto& def : kMetricDefs)
      if (tasks_present.count(def.task)) selected.push_back(def);
  } else {
    for (const auto& name : opts.metrics) {
      const MetricDef* found = nullptr;
      for (const auto& def : kMetricDefs)
        if (name == def.name) found = &def;
      if (!found) throw ConfigError("unknown metric: " + name);
      if (!tasks_present.count(found->task))
        throw DataError("metric '" + name + "' requested but references contain no " +
                        std::string(to_string(found->task)) + " records");
      selected.push_back(*found);
    }
  }
  if (selected.empty()) throw DataError("no metrics to evaluate");

  // Reference groups over the full reference set (not only joined records),
  // so every available human answer participates.
  std::unordered_map<std::string, std::vector<std::string>> caption_groups, referring_groups;
  for (const auto& r : refs) {
    if (r.task == TaskKind::Caption) caption_groups[caption_group_key(r)].push_back(r.answer);
    else if (r.task == TaskKind::Referring)
      referring_groups[referring_group_key(r)].push_back(r.answer);
  }

  std::set<TaskKind> selected_tasks;
  for (const auto& def : selected) selected_tasks.insert(def.task);

  // dataset -> task -> joined records ("" key = overall)
  std::map<std::string, std::map<TaskKind, std::vector<JoinedRecord>>> buckets;
  for (const auto& r : refs) {
    auto it = joined.find(r.id);
    if (it == joined.end()) continue;
    if (!selected_tasks.count(r.task)) continue;
    buckets[""][r.task].push_back({&r, it->second});
    buckets[r.source_dataset][r.task].push_back({&r, it->second});
  }

  for (const auto& [ds, tasks] : buckets) {
    if (ds.empty()) continue;
    uint64_t n = 0;
    for (const auto& [task, records] : tasks) n += records.size();
    report.per_dataset[ds].evaluated = n;
    report.evaluated += n;
  }

  auto compute = [&](const MetricDef& def,
                     const std::vector<JoinedRecord>& records) -> double {
    switch (def.task) {
      case TaskKind::Caption: {
        std::vector<std::string> hyps;
        std::vector<std::vector<std::string>> groups;
        for (const auto& jr : records) {
          hyps.push_back(*jr.pred);
          groups.push_back(caption_groups.at(caption_group_key(*jr.ref)));
        }
        if (std::string_view(def.name) == "bleu4") return bleu4(hyps, groups);
        return cider(hyps, groups);
      }
      case TaskKind::Vqa: {
        double sum = 0;
        for (const auto& jr : records) {
          const auto& answers = jr.ref->ref_answers.empty()
                                    ? std::vector<std::string>{jr.ref->answer}
                                    : jr.ref->ref_answers;
          sum += vqa_accuracy(*jr.pred, answers, table);
        }
        return sum / static_cast<double>(records.size());
      }
      case TaskKind::Recognition: {
        std::vector<std::string> p, r;
        for (const auto& jr : records) {
          p.push_back(*jr.pred);
          r.push_back(jr.ref->answer);
        }
        return top1_accuracy(p, r, table);
      }
      case TaskKind::Referring: {
        std::vector<std::string> hyps;
        std::vector<std::vector<std::string>> groups;
        for (const auto& jr : records) {
          hyps.push_back(*jr.pred);
          groups.push_back(referring_groups.at(referring_group_key(*jr.ref)));
        }
        return meteor(hyps, groups);
      }
      case TaskKind::Detection: {
        uint64_t correct = 0;
        for (const auto& jr : records) {
          if (!jr.ref->bbox) throw DataError("detection record without bbox: " + jr.ref->id);
          try {
            QuantBBox q = parse_bbox_text(*jr.pred, BBoxParseMode::Tolerant);
            if (quant_iou(q, *jr.ref->bbox) >= opts.iou_threshold) ++correct;
          } catch (const ParseError&) {
            ++report.unparseable_boxes;
          } catch (const RangeError&) {
            ++report.unparseable_boxes;
          }
        }
        return static_cast<double>(correct) / static_cast<double>(records.size());
      }
    }
    throw std::logic_error("unreachable metric task");
  };

  for (const auto& def : selected) {
    const auto& overall_bucket = buckets[""][def.task];
    if (overall_bucket.empty())
      throw DataError(std::string("no joined records for metric '") + def.name + "'");
    double score = compute(def, overall_bucket);
    if (!std::isfinite(score))
      throw std::logic_error(std::string("non-finite score for metric ") + def.name);
    report.overall[def.name] = score;
    if (std::string_view(def.name) == "cider" && overall_bucket.size() < 2)
      report.notes.push_back("cider: single-image corpus, IDF is degenerate");

    for (auto& [ds, tasks] : buckets) {
      if (ds.empty()) continue;
      auto it = tasks.find(def.task);
      if (it == tasks.end() || it->second.empty()) continue;
      report.per_dataset[ds].scores[def.name] = compute(def, it->second);
    }
  }

  report.notes.push_back("meteor: exact-match stage only (no stemming or synonym modules)");
  return report;
}

json MetricReport::to_json() const {
  json j;
  j["metrics"] = overall;
  json per;
  for (const auto& [ds, scores] : per_dataset) {
    per[ds] = {{"evaluated", scores.evaluated}, {"scores", scores.scores}};
  }
  j["per_dataset"] = per.is_null() ? json::object() : per;
  j["counts"] = {{"evaluated", evaluated},
                 {"orphaned", orphaned},
                 {"missing", missing},
                 {"unparseable_boxes", unparseable_boxes}};
  j["normalization_hash"] = normalization_hash;
  j["notes"] = notes;
  return j;
}

std::string format_report_table(const MetricReport& report) {
  std::ostringstream out;
  char buf[64];
  out << "metric          overall";
  std::vector<std::string> datasets;
  for (const auto& [ds, _] : report.per_dataset) datasets.push_back(ds);
  for (const auto& ds : datasets) {
    std::snprintf(buf, sizeof(buf), "  %12s", ds.c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& [name, score] : report.overall) {
    std::snprintf(buf, sizeof(buf), "%-14s  %.4f", name.c_str(), score);
    out << buf;
    for (const auto& ds : datasets) {
      const auto& scores = report.per_dataset.at(ds).scores;
      auto it = scores.find(name);
      if (it != scores.end()) {
        std::snprintf(buf, sizeof(buf), "  %12.4f", it->second);
        out << buf;
      } else {
        std::snprintf(buf, sizeof(buf), "  %12s", "-");
        out << buf;
      }
    }
    out << '\n';
  }
  out << "evaluated=" << report.evaluated << " orphaned=" << report.orphaned
      << " missing=" << report.missing
      << " unparseable_boxes=" << report.unparseable_boxes << '\n';
  for (const auto& note : report.notes) out << "note: " << note << '\n';
  return out.str();
}

}  // namespace vqain

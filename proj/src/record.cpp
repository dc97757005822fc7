#include "vqain/record.hpp"

#include <nlohmann/json.hpp>

#include "vqain/error.hpp"

using json = nlohmann::json;

namespace vqain {

std::string_view to_string(TaskKind t) {
  switch (t) {
    case TaskKind::Caption: return "caption";
    case TaskKind::Recognition: return "recognition";
    case TaskKind::Detection: return "detection";
    case TaskKind::Referring: return "referring";
    case TaskKind::Vqa: return "vqa";
  }
  return "caption";
}

std::string_view to_string(LengthMode m) {
  return m == LengthMode::Short ? "short" : "long";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

TaskKind task_from_string(std::string_view s) {
  if (s == "caption") return TaskKind::Caption;
  if (s == "recognition") return TaskKind::Recognition;
  if (s == "detection") return TaskKind::Detection;
  if (s == "referring") return TaskKind::Referring;
  if (s == "vqa") return TaskKind::Vqa;
  throw DataError("unknown task kind: " + std::string(s));
}

LengthMode length_mode_from_string(std::string_view s) {
  if (s == "short") return LengthMode::Short;
  if (s == "long") return LengthMode::Long;
  throw DataError("unknown length mode: " + std::string(s));
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw DataError("unknown split: " + std::string(s));
}

std::string record_violation(const VqaInRecord& r) {
  if (r.id.empty()) return "empty id";
  if (r.image.empty()) return "empty image path";
  if (r.question.empty()) return "empty question";
  if (r.answer.empty()) return "empty answer";
  if (r.task == TaskKind::Detection || r.task == TaskKind::Referring) {
    if (!r.bbox) return "detection/referring record without bbox";
    const std::string text = render_bbox_text(*r.bbox);
    const std::string& host =
        r.task == TaskKind::Referring ? r.question : r.answer;
    if (host.find(text) == std::string::npos)
      return "bbox text missing from " +
             std::string(r.task == TaskKind::Referring ? "question" : "answer");
  }
  return "";
}

std::string record_to_jsonl(const VqaInRecord& r) {
  json j;
  j["id"] = r.id;
  j["image"] = r.image;
  j["task"] = to_string(r.task);
  j["question"] = r.question;
  j["answer"] = r.answer;
  j["length_mode"] = to_string(r.length_mode);
  j["source_dataset"] = r.source_dataset;
  j["source_index"] = r.source_index;
  if (r.bbox) j["bbox"] = {r.bbox->x1, r.bbox->y1, r.bbox->x2, r.bbox->y2};
  if (!r.ref_answers.empty()) j["ref_answers"] = r.ref_answers;
  return j.dump();
}

VqaInRecord record_from_jsonl(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid record JSON: ") + e.what());
  }
  try {
    VqaInRecord r;
    r.id = j.at("id").get<std::string>();
    r.image = j.at("image").get<std::string>();
    r.task = task_from_string(j.at("task").get<std::string>());
    r.question = j.at("question").get<std::string>();
    r.answer = j.at("answer").get<std::string>();
    r.length_mode = length_mode_from_string(j.at("length_mode").get<std::string>());
    r.source_dataset = j.at("source_dataset").get<std::string>();
    r.source_index = j.at("source_index").get<uint64_t>();
    if (j.contains("bbox")) {
      const auto& b = j.at("bbox");
      if (!b.is_array() || b.size() != 4)
        throw DataError("record bbox must be a 4-element array");
      QuantBBox q{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      check_quant_bbox(q);
      r.bbox = q;
    }
    if (j.contains("ref_answers"))
      r.ref_answers = j.at("ref_answers").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid record field: ") + e.what());
  }
}

const std::string& annotation_image(const SourceAnnotation& a) {
  return std::visit([](const auto& v) -> const std::string& { return v.image; }, a);
}

TaskKind annotation_task(const SourceAnnotation& a) {
  struct Visitor {
    TaskKind operator()(const CaptionAnn&) const { return TaskKind::Caption; }
    TaskKind operator()(const LabelAnn&) const { return TaskKind::Recognition; }
    TaskKind operator()(const DetectionAnn&) const { return TaskKind::Detection; }
    TaskKind operator()(const ReferringAnn&) const { return TaskKind::Referring; }
    TaskKind operator()(const VqaAnn&) const { return TaskKind::Vqa; }
  };
  return std::visit(Visitor{}, a);
}

}  // namespace vqain

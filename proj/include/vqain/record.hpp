#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vqain/bbox.hpp"

namespace vqain {

enum class TaskKind { Caption, Recognition, Detection, Referring, Vqa };
enum class LengthMode { Short, Long };
enum class Split { Train, Val, Test };

std::string_view to_string(TaskKind t);
std::string_view to_string(LengthMode m);
std::string_view to_string(Split s);

TaskKind task_from_string(std::string_view s);
LengthMode length_mode_from_string(std::string_view s);
Split split_from_string(std::string_view s);

// One unified question-answering sample. This is the line schema of the
// compiled JSONL files.
struct VqaInRecord {
  std::string id;              // "{source_dataset}/{split}/{source_index}"
  std::string image;           // relative path
  TaskKind task = TaskKind::Caption;
  std::string question;
  std::string answer;
  LengthMode length_mode = LengthMode::Short;
  std::string source_dataset;
  uint64_t source_index = 0;
  std::optional<QuantBBox> bbox;
  // Full human answer list for VQA-style sources; eval needs all ten
  // annotator answers, not just the consensus stored in `answer`.
  std::vector<std::string> ref_answers;
};

// Invariant check used by tests and the stats command. Returns an empty
// string when the record is well formed, else a reason.
std::string record_violation(const VqaInRecord& r);

// Canonical JSONL codec: UTF-8, keys sorted, no whitespace. Byte-stable
// across platforms so compiled files can be compared with cmp(1).
std::string record_to_jsonl(const VqaInRecord& r);
VqaInRecord record_from_jsonl(std::string_view line);

// Raw source annotations, one variant per source task.
struct CaptionAnn {
  std::string image;
  std::string caption;
};

struct LabelAnn {
  std::string image;
  std::string category;
};

struct DetectionAnn {
  std::string image;
  std::string category;
  BBox bbox;
};

struct ReferringAnn {
  std::string image;
  std::string object_phrase;
  std::string referring_text;
  BBox bbox;
};

struct VqaAnn {
  std::string image;
  std::string question;
  std::vector<std::string> answers;  // >= 1, usually 10
};

using SourceAnnotation =
    std::variant<CaptionAnn, LabelAnn, DetectionAnn, ReferringAnn, VqaAnn>;

const std::string& annotation_image(const SourceAnnotation& a);
TaskKind annotation_task(const SourceAnnotation& a);

}  // namespace vqain

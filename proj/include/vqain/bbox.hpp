#pragma once

#include <string>
#include <string_view>

namespace vqain {

// Pixel-space box, corner convention (x1,y1) top-left, (x2,y2) bottom-right,
// tied to the dimensions of the image it lives in.
struct BBox {
  double x1 = 0;
  double y1 = 0;
  double x2 = 0;
  double y2 = 0;
  int img_w = 0;
  int img_h = 0;

  bool operator==(const BBox&) const = default;
};

// The textual form of a box: four integer percentile bins in [0, 100].
struct QuantBBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool operator==(const QuantBBox&) const = default;
};

bool bbox_valid(const BBox& b);
bool quant_bbox_valid(const QuantBBox& q);

// Throws GeometryError when the box violates its invariants.
void check_bbox(const BBox& b);
void check_quant_bbox(const QuantBBox& q);

// round-half-up(coord / dimension * 100) per coordinate.
QuantBBox quantize_bbox(const BBox& b);

// bin / 100 * dimension per coordinate. quantize(dequantize(q)) == q.
BBox dequantize_bbox(const QuantBBox& q, int img_w, int img_h);

// Canonical text form "[x1,y1,x2,y2]": decimal integers, no spaces.
std::string render_bbox_text(const QuantBBox& q);

enum class BBoxParseMode { Strict, Tolerant };

// Parses the canonical form; Tolerant additionally accepts whitespace after
// commas (model outputs are sloppy). Throws ParseError on grammar violations
// and RangeError for bins outside [0,100] or inverted corners.
QuantBBox parse_bbox_text(std::string_view s, BBoxParseMode mode = BBoxParseMode::Strict);

// Intersection-over-union of two quantized boxes. Invariant to the image
// dimensions they were quantized against (the scale factors cancel), so it
// is computed directly in bin space. Degenerate/degenerate pairs score 0.
double quant_iou(const QuantBBox& a, const QuantBBox& b);

double pixel_iou(const BBox& a, const BBox& b);

}  // namespace vqain

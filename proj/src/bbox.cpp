#include "vqain/bbox.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "vqain/error.hpp"

namespace vqain {

bool bbox_valid(const BBox& b) {
  if (b.img_w <= 0 || b.img_h <= 0) return false;
  if (!(b.x1 >= 0 && b.x1 <= b.x2 && b.x2 <= b.img_w)) return false;
  if (!(b.y1 >= 0 && b.y1 <= b.y2 && b.y2 <= b.img_h)) return false;
  return true;
}

bool quant_bbox_valid(const QuantBBox& q) {
  auto in_range = [](int v) { return v >= 0 && v <= 100; };
  return in_range(q.x1) && in_range(q.y1) && in_range(q.x2) && in_range(q.y2) &&
         q.x1 <= q.x2 && q.y1 <= q.y2;
}

void check_bbox(const BBox& b) {
  if (b.img_w <= 0 || b.img_h <= 0)
    throw GeometryError("bbox image dimensions must be positive");
  if (!bbox_valid(b)) throw GeometryError("bbox coordinates out of range or inverted");
}

void check_quant_bbox(const QuantBBox& q) {
  if (!quant_bbox_valid(q))
    throw GeometryError("quantized bbox bins must be ordered and in [0,100]");
}

namespace {

// round-half-up, locale independent. Computed as (coord * 100) / dim so the
// numerator stays exact for integer-valued pixel coordinates.
int quantize_coord(double coord, int dim) {
  double v = coord * 100.0 / static_cast<double>(dim);
  return static_cast<int>(std::floor(v + 0.5));
}

}  // namespace

QuantBBox quantize_bbox(const BBox& b) {
  check_bbox(b);
  QuantBBox q{quantize_coord(b.x1, b.img_w), quantize_coord(b.y1, b.img_h),
              quantize_coord(b.x2, b.img_w), quantize_coord(b.y2, b.img_h)};
  check_quant_bbox(q);
  return q;
}

BBox dequantize_bbox(const QuantBBox& q, int img_w, int img_h) {
  check_quant_bbox(q);
  if (img_w <= 0 || img_h <= 0)
    throw GeometryError("image dimensions must be positive");
  auto coord = [](int bin, int dim) {
    return static_cast<double>(bin) * static_cast<double>(dim) / 100.0;
  };
  return BBox{coord(q.x1, img_w), coord(q.y1, img_h),
              coord(q.x2, img_w), coord(q.y2, img_h), img_w, img_h};
}

std::string render_bbox_text(const QuantBBox& q) {
  check_quant_bbox(q);
  std::string s;
  s.reserve(16);
  s += '[';
  s += std::to_string(q.x1);
  s += ',';
  s += std::to_string(q.y1);
  s += ',';
  s += std::to_string(q.x2);
  s += ',';
  s += std::to_string(q.y2);
  s += ']';
  return s;
}

namespace {

struct Cursor {
  std::string_view s;
  size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  void expect(char c, const char* what) {
    if (done() || s[pos] != c) throw ParseError(std::string("expected ") + what, pos);
    ++pos;
  }

  // Decimal integer, no sign, no leading zeros.
  int parse_int() {
    if (done() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ParseError("expected digit", pos);
    size_t start = pos;
    long value = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      value = value * 10 + (s[pos] - '0');
      if (value > 1000) throw RangeError("bbox bin out of range [0,100]");
      ++pos;
    }
    if (pos - start > 1 && s[start] == '0')
      throw ParseError("leading zeros are not canonical", start);
    return static_cast<int>(value);
  }

  void skip_ws() {
    while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
};

}  // namespace

QuantBBox parse_bbox_text(std::string_view s, BBoxParseMode mode) {
  Cursor c{s};
  c.expect('[', "'['");
  int v[4];
  for (int i = 0; i < 4; ++i) {
    v[i] = c.parse_int();
    if (v[i] > 100) throw RangeError("bbox bin out of range [0,100]");
    if (i < 3) {
      c.expect(',', "','");
      if (mode == BBoxParseMode::Tolerant) c.skip_ws();
    }
  }
  c.expect(']', "']'");
  if (!c.done()) throw ParseError("trailing characters after bbox", c.pos);
  QuantBBox q{v[0], v[1], v[2], v[3]};
  if (q.x1 > q.x2 || q.y1 > q.y2) throw RangeError("bbox corners are inverted");
  return q;
}

namespace {

double iou_impl(double ax1, double ay1, double ax2, double ay2,
                double bx1, double by1, double bx2, double by2) {
  double iw = std::min(ax2, bx2) - std::max(ax1, bx1);
  double ih = std::min(ay2, by2) - std::max(ay1, by1);
  if (iw <= 0 || ih <= 0) return 0.0;
  double inter = iw * ih;
  double area_a = (ax2 - ax1) * (ay2 - ay1);
  double area_b = (bx2 - bx1) * (by2 - by1);
  double uni = area_a + area_b - inter;
  if (uni <= 0) return 0.0;
  return inter / uni;
}

}  // namespace

double quant_iou(const QuantBBox& a, const QuantBBox& b) {
  return iou_impl(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1, b.x2, b.y2);
}

double pixel_iou(const BBox& a, const BBox& b) {
  return iou_impl(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1, b.x2, b.y2);
}

}  // namespace vqain

#include "lcmwarp/views.hpp"

#include <stdexcept>
#include <vector>

#include "lcmwarp/errors.hpp"

namespace lcmwarp {

namespace {

int normalize_degrees(int degrees) {
  if (degrees % 90 != 0) {
    throw std::invalid_argument("rotation must be a multiple of 90 degrees, got " +
                                std::to_string(degrees));
  }
  return ((degrees % 360) + 360) % 360;
}

// One counterclockwise quarter turn: the top-right pixel becomes top-left.
ImageBuffer rotate_ccw(const ImageBuffer& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  ImageBuffer out(h, w, img.channels());
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto px = img.pixel(x, y);
      std::copy(px.begin(), px.end(), out.data().data() + out.index(y, w - 1 - x));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Top: return "top";
    case Direction::Bottom: return "bottom";
  }
  return "left";
}

Direction parse_direction(std::string_view name) {
  for (Direction d : kAllDirections) {
    if (to_string(d) == name) return d;
  }
  throw ConfigError("unknown view '" + std::string(name) + "' (expected left|right|top|bottom)");
}

ImageBuffer rotate(const ImageBuffer& img, int degrees) {
  ImageBuffer out = img;
  for (int turns = normalize_degrees(degrees) / 90; turns > 0; --turns) out = rotate_ccw(out);
  return out;
}

ImageBuffer flip(const ImageBuffer& img, FlipAxis axis) {
  if (axis == FlipAxis::None) return img;
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  ImageBuffer out(w, h, img.channels());
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t tx = axis == FlipAxis::Horizontal ? w - 1 - x : x;
      const std::size_t ty = axis == FlipAxis::Vertical ? h - 1 - y : y;
      const auto px = img.pixel(x, y);
      std::copy(px.begin(), px.end(), out.data().data() + out.index(tx, ty));
    }
  }
  return out;
}

ImageBuffer orient(const ImageBuffer& img, int rotation, FlipAxis axis) {
  return flip(rotate(img, rotation), axis);
}

ViewSpec ViewSpec::canonical(Direction d) {
  switch (d) {
    case Direction::Left: return {d, 0, FlipAxis::None, 0, FlipAxis::None};
    case Direction::Right: return {d, 0, FlipAxis::Horizontal, 0, FlipAxis::Horizontal};
    case Direction::Top: return {d, 90, FlipAxis::None, 270, FlipAxis::None};
    case Direction::Bottom: return {d, 90, FlipAxis::Horizontal, 270, FlipAxis::Vertical};
  }
  return {};
}

void ViewSpec::validate() const {
  for (int r : {pre_rotation, post_rotation}) {
    if (r != 0 && r != 90 && r != 270) {
      throw ConfigError("view rotation must be 0, 90 or 270 degrees, got " + std::to_string(r));
    }
  }
  // A 3x2 probe with distinct values detects any non-identity composite.
  ImageBuffer probe(3, 2, 1, std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
  const ImageBuffer round_trip =
      orient(orient(probe, pre_rotation, pre_flip), post_rotation, post_flip);
  if (!(round_trip == probe)) {
    throw ConfigError("view post-orientation does not undo its pre-orientation");
  }
}

ImageBuffer synthesize_view(const ImageBuffer& img, const ViewSpec& spec, const Transform& t,
                            WarpMode mode, const PadConfig& pad, std::span<const double> fill) {
  spec.validate();
  const std::vector<double> zeros(img.channels(), 0.0);
  if (fill.empty()) fill = zeros;
  const ImageBuffer oriented = orient(img, spec.pre_rotation, spec.pre_flip);
  const ImageBuffer warped = warp(oriented, t, mode, fill);
  return pad_image(orient(warped, spec.post_rotation, spec.post_flip), pad.margin, pad.policy);
}

const ImageBuffer& ViewSet::get(Direction d) const {
  switch (d) {
    case Direction::Left: return left;
    case Direction::Right: return right;
    case Direction::Top: return top;
    case Direction::Bottom: return bottom;
  }
  return left;
}

ViewSet synthesize_all_views(const ImageBuffer& img, const Transform& t, WarpMode mode,
                             const PadConfig& pad, std::span<const double> fill) {
  auto make = [&](Direction d) {
    return synthesize_view(img, ViewSpec::canonical(d), t, mode, pad, fill);
  };
  return {make(Direction::Left), make(Direction::Right), make(Direction::Top),
          make(Direction::Bottom)};
}

}  // namespace lcmwarp

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcmwarp/grid_warp.hpp"
#include "lcmwarp/image.hpp"

namespace lcmwarp {

enum class Direction { Left, Right, Top, Bottom };
enum class FlipAxis { None, Horizontal, Vertical };

inline constexpr std::array<Direction, 4> kAllDirections = {Direction::Left, Direction::Right,
                                                            Direction::Top, Direction::Bottom};

std::string_view to_string(Direction d);
// Throws ConfigError for unknown names.
Direction parse_direction(std::string_view name);

// Quarter turns counterclockwise; degrees must be a multiple of 90.
ImageBuffer rotate(const ImageBuffer& img, int degrees);
// Horizontal mirrors left-right (x -> W-1-x); Vertical mirrors top-bottom.
ImageBuffer flip(const ImageBuffer& img, FlipAxis axis);

// Orientation applied before and after the base warp. Each stage rotates
// first and flips second. The post stage must exactly undo the pre stage.
struct ViewSpec {
  Direction direction = Direction::Left;
  int pre_rotation = 0;
  FlipAxis pre_flip = FlipAxis::None;
  int post_rotation = 0;
  FlipAxis post_flip = FlipAxis::None;

  // The table used for the four standard views:
  //   Left    no orientation change
  //   Right   mirror horizontally before and after
  //   Top     rotate 90 before, 270 after
  //   Bottom  rotate 90 + mirror horizontally before,
  //           rotate 270 + mirror vertically after
  // Right and Bottom are the mirror images of Left and Top.
  static ViewSpec canonical(Direction d);

  // Throws ConfigError unless rotations are in {0, 90, 270} and the post
  // stage cancels the pre stage.
  void validate() const;
};

ImageBuffer orient(const ImageBuffer& img, int rotation, FlipAxis axis);

struct PadConfig {
  std::size_t margin = 8;
  PadPolicy policy = PadPolicy::Reflect;
};

// pre-orient -> warp -> post-orient -> pad. Empty `fill` means zeros.
ImageBuffer synthesize_view(const ImageBuffer& img, const ViewSpec& spec, const Transform& t,
                            WarpMode mode, const PadConfig& pad,
                            std::span<const double> fill = {});

struct ViewSet {
  ImageBuffer left;
  ImageBuffer right;
  ImageBuffer top;
  ImageBuffer bottom;

  const ImageBuffer& get(Direction d) const;
};

ViewSet synthesize_all_views(const ImageBuffer& img, const Transform& t, WarpMode mode,
                             const PadConfig& pad, std::span<const double> fill = {});

}  // namespace lcmwarp

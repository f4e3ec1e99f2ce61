#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "lcmwarp/complex_map.hpp"
#include "lcmwarp/image.hpp"
#include "lcmwarp/mobius.hpp"

namespace lcmwarp {

using Transform = std::variant<LogParams, MobiusParams>;

enum class WarpMode { InverseBilinear, ForwardScatter };

enum class PadPolicy { Zero, Replicate, Reflect };

// Minimum spread of transformed coordinates on an axis with more than one
// pixel before the range counts as collapsed.
inline constexpr double kMinRange = 1e-9;

// Pixel center (x, y) of a width x height image mapped into [-1,1]^2.
Complex normalize_coords(double x, double y, std::size_t width, std::size_t height);

// Inverse of normalize_coords for a given image size.
double denormalize(double coord, std::size_t size);

// Applies `t` to z. Throws SingularInput / NearSingularity.
Complex apply_transform(Complex z, const Transform& t);

// Pixel-center coordinates of a width x height frame pushed through a
// transform and min-max rescaled back onto the frame's pixel-center span
// [-1 + 1/W, 1 - 1/W] x [-1 + 1/H, 1 - 1/H]. Both warp modes are driven
// from this one computation so they target the same geometry.
struct MappedFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> x;  // normalized, row-major
  std::vector<double> y;
  std::vector<std::uint8_t> valid;
  std::size_t invalid_count = 0;
  // Raw transformed extent that was mapped onto the pixel-center span.
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

// Throws DomainViolation for LogParams that are not domain-safe and
// DegenerateRange when every pixel is singular or the valid
// coordinates span less than kMinRange on an axis longer than one pixel.
MappedFrame map_frame(std::size_t width, std::size_t height, const Transform& t);

// Per output pixel source coordinates in normalized space.
struct SamplingGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> sx;
  std::vector<double> sy;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return width * height; }
  std::size_t invalid_count() const;
};

// Identity grid: every output pixel samples its own center.
SamplingGrid identity_grid(std::size_t width, std::size_t height);

// Output pixel q samples the source at rescale(t(q)). This is the grid the
// pipeline cost model describes; every output pixel receives content.
SamplingGrid build_grid(std::size_t width, std::size_t height, const Transform& t);

// Output pixel q samples the source at t^-1(rescale^-1(q)), i.e. the
// hole-free inverse of warp_scatter's geometry (closed-form inverse: exp for
// the log map, the inverse coefficient matrix for Möbius). Pixels whose
// preimage falls outside the frame are left for the fill value.
SamplingGrid build_inverse_grid(std::size_t width, std::size_t height, const Transform& t);

// Inverse warp with bilinear interpolation. Output takes the grid's size.
// Invalid or out-of-bounds entries get `fill`. Throws ChannelMismatch when
// fill.size() != src.channels() and std::invalid_argument when a fill value
// is outside [0,1].
ImageBuffer warp_bilinear(const ImageBuffer& src, const SamplingGrid& grid,
                          std::span<const double> fill);

// Forward pass: every source pixel is pushed through the transform, rounded
// to the nearest output pixel and written there; later source pixels in
// row-major order overwrite earlier ones. Unwritten pixels hold `fill`.
ImageBuffer warp_scatter(const ImageBuffer& src, const Transform& t, std::span<const double> fill,
                         std::size_t* holes = nullptr);

ImageBuffer warp(const ImageBuffer& src, const Transform& t, WarpMode mode,
                 std::span<const double> fill);

// Adds `margin` pixels on every side. Reflect mirrors including the edge
// pixel (abc -> cba|abc|cba).
ImageBuffer pad_image(const ImageBuffer& img, std::size_t margin, PadPolicy policy);

// Removes `margin` pixels on every side.
ImageBuffer crop_margin(const ImageBuffer& img, std::size_t margin);

}  // namespace lcmwarp

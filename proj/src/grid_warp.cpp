#include "lcmwarp/grid_warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lcmwarp/errors.hpp"

namespace lcmwarp {

namespace {

// Sample positions this close (in pixels) outside the source are clamped
// onto the border instead of being filled; absorbs rescale round-off.
constexpr double kBorderTolerance = 1e-6;
// Fractional offsets this close to an integer are snapped so that sampling
// at a pixel center reproduces the pixel exactly.
constexpr double kSnap = 1e-9;

void check_fill(const ImageBuffer& src, std::span<const double> fill) {
  if (fill.size() != src.channels()) {
    throw ChannelMismatch("fill has " + std::to_string(fill.size()) + " values but image has " +
                          std::to_string(src.channels()) + " channels");
  }
  for (double v : fill) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("fill value outside [0,1]");
  }
}

struct Span {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Rescales [from.lo, from.hi] onto the pixel-center span of an axis of
// length n; a single-pixel axis collapses to its only center, 0.
void rescale_axis(std::vector<double>& values, const std::vector<std::uint8_t>& valid, Span from,
                  std::size_t n) {
  const double lo = -1.0 + 1.0 / static_cast<double>(n);
  const double hi = 1.0 - 1.0 / static_cast<double>(n);
  const double scale = n > 1 ? (hi - lo) / (from.hi - from.lo) : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i]) continue;
    values[i] = n > 1 ? lo + (values[i] - from.lo) * scale : 0.0;
  }
}

// Position along one axis resolved to a base index and a fractional weight.
struct AxisSample {
  std::size_t i0;
  std::size_t i1;
  double frac;
};

bool resolve_axis(double pos, std::size_t size, AxisSample& out) {
  const double last = static_cast<double>(size - 1);
  if (!(pos >= -kBorderTolerance && pos <= last + kBorderTolerance)) return false;
  pos = std::clamp(pos, 0.0, last);
  double base = std::floor(pos);
  double frac = pos - base;
  if (frac < kSnap) {
    frac = 0.0;
  } else if (frac > 1.0 - kSnap) {
    frac = 0.0;
    base += 1.0;
  }
  out.i0 = static_cast<std::size_t>(base);
  out.i1 = std::min(out.i0 + 1, size - 1);
  out.frac = frac;
  return true;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < static_cast<std::ptrdiff_t>(n) ? m : period - 1 - m);
}

}  // namespace

Complex normalize_coords(double x, double y, std::size_t width, std::size_t height) {
  return {2.0 * (x + 0.5) / static_cast<double>(width) - 1.0,
          2.0 * (y + 0.5) / static_cast<double>(height) - 1.0};
}

double denormalize(double coord, std::size_t size) {
  return (coord + 1.0) * static_cast<double>(size) / 2.0 - 0.5;
}

Complex apply_transform(Complex z, const Transform& t) {
  return std::visit(
      [z](const auto& p) -> Complex {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, LogParams>) {
          return log_conformal_map(z, p);
        } else {
          return mobius_map(z, p);
        }
      },
      t);
}

MappedFrame map_frame(std::size_t width, std::size_t height, const Transform& t) {
  if (width == 0 || height == 0) throw std::invalid_argument("frame dimensions must be >= 1");
  if (const auto* log_params = std::get_if<LogParams>(&t)) log_params->require_domain_safe();
  MappedFrame frame;
  frame.width = width;
  frame.height = height;
  const std::size_t n = width * height;
  frame.x.assign(n, 0.0);
  frame.y.assign(n, 0.0);
  frame.valid.assign(n, 0);

  Span xs;
  Span ys;
  std::visit(
      [&](const auto& params) {
        for (std::size_t py = 0; py < height; ++py) {
          for (std::size_t px = 0; px < width; ++px) {
            const std::size_t i = py * width + px;
            const Complex z = normalize_coords(static_cast<double>(px), static_cast<double>(py),
                                               width, height);
            Complex w;
            try {
              if constexpr (std::is_same_v<std::decay_t<decltype(params)>, LogParams>) {
                w = log_conformal_map(z, params);
              } else {
                w = mobius_map(z, params);
              }
            } catch (const SingularInput&) {
              ++frame.invalid_count;
              continue;
            } catch (const NearSingularity&) {
              ++frame.invalid_count;
              continue;
            }
            frame.x[i] = w.real();
            frame.y[i] = w.imag();
            frame.valid[i] = 1;
            xs.add(w.real());
            ys.add(w.imag());
          }
        }
      },
      t);

  if (frame.invalid_count == n) {
    throw DegenerateRange("every pixel of the frame hits a singularity");
  }
  if ((width > 1 && !(xs.hi - xs.lo >= kMinRange)) || (height > 1 && !(ys.hi - ys.lo >= kMinRange))) {
    throw DegenerateRange("transformed coordinates collapse (x span " +
                          std::to_string(xs.hi - xs.lo) + ", y span " +
                          std::to_string(ys.hi - ys.lo) + ")");
  }
  rescale_axis(frame.x, frame.valid, xs, width);
  rescale_axis(frame.y, frame.valid, ys, height);
  frame.x_lo = xs.lo;
  frame.x_hi = xs.hi;
  frame.y_lo = ys.lo;
  frame.y_hi = ys.hi;
  return frame;
}

std::size_t SamplingGrid::invalid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
}

SamplingGrid identity_grid(std::size_t width, std::size_t height) {
  SamplingGrid grid{width, height, {}, {}, {}};
  grid.sx.resize(width * height);
  grid.sy.resize(width * height);
  grid.valid.assign(width * height, 1);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const Complex z =
          normalize_coords(static_cast<double>(x), static_cast<double>(y), width, height);
      grid.sx[y * width + x] = z.real();
      grid.sy[y * width + x] = z.imag();
    }
  }
  return grid;
}

SamplingGrid build_grid(std::size_t width, std::size_t height, const Transform& t) {
  MappedFrame frame = map_frame(width, height, t);
  return SamplingGrid{width, height, std::move(frame.x), std::move(frame.y),
                      std::move(frame.valid)};
}

SamplingGrid build_inverse_grid(std::size_t width, std::size_t height, const Transform& t) {
  const MappedFrame frame = map_frame(width, height, t);
  // Undo the rescale of one axis: pixel-center span -> raw transformed span.
  auto unscale = [](double q, double from_lo, double from_hi, std::size_t n) {
    if (n == 1) return 0.5 * (from_lo + from_hi);
    const double lo = -1.0 + 1.0 / static_cast<double>(n);
    const double hi = 1.0 - 1.0 / static_cast<double>(n);
    return from_lo + (q - lo) * (from_hi - from_lo) / (hi - lo);
  };

  SamplingGrid grid{width, height, {}, {}, {}};
  grid.sx.assign(width * height, 0.0);
  grid.sy.assign(width * height, 0.0);
  grid.valid.assign(width * height, 0);
  for (std::size_t py = 0; py < height; ++py) {
    for (std::size_t px = 0; px < width; ++px) {
      const std::size_t i = py * width + px;
      const Complex q =
          normalize_coords(static_cast<double>(px), static_cast<double>(py), width, height);
      const Complex w(unscale(q.real(), frame.x_lo, frame.x_hi, width),
                      unscale(q.imag(), frame.y_lo, frame.y_hi, height));
      Complex z;
      if (const auto* lp = std::get_if<LogParams>(&t)) {
        z = (std::exp(w) - lp->c()) / lp->k();
      } else {
        const auto& mp = std::get<MobiusParams>(t);
        const Complex den = mp.a() - mp.c() * w;
        if (!(std::abs(den) > kSingularEps)) continue;
        z = (mp.d() * w - mp.b()) / den;
      }
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      grid.sx[i] = z.real();
      grid.sy[i] = z.imag();
      grid.valid[i] = 1;
    }
  }
  return grid;
}

ImageBuffer warp_bilinear(const ImageBuffer& src, const SamplingGrid& grid,
                          std::span<const double> fill) {
  check_fill(src, fill);
  if (grid.sx.size() != grid.size() || grid.sy.size() != grid.size() ||
      grid.valid.size() != grid.size()) {
    throw std::invalid_argument("sampling grid arrays do not match its dimensions");
  }
  const std::size_t channels = src.channels();
  ImageBuffer out(grid.width, grid.height, channels);
  auto dst = out.data();
  const auto pixels = src.data();
  const std::size_t src_w = src.width();

  for (std::size_t i = 0; i < grid.size(); ++i) {
    double* o = dst.data() + i * channels;
    AxisSample ax{};
    AxisSample ay{};
    if (!grid.valid[i] || !resolve_axis(denormalize(grid.sx[i], src.width()), src.width(), ax) ||
        !resolve_axis(denormalize(grid.sy[i], src.height()), src.height(), ay)) {
      std::copy(fill.begin(), fill.end(), o);
      continue;
    }
    const double w00 = (1.0 - ax.frac) * (1.0 - ay.frac);
    const double w10 = ax.frac * (1.0 - ay.frac);
    const double w01 = (1.0 - ax.frac) * ay.frac;
    const double w11 = ax.frac * ay.frac;
    const double* p00 = pixels.data() + (ay.i0 * src_w + ax.i0) * channels;
    const double* p10 = pixels.data() + (ay.i0 * src_w + ax.i1) * channels;
    const double* p01 = pixels.data() + (ay.i1 * src_w + ax.i0) * channels;
    const double* p11 = pixels.data() + (ay.i1 * src_w + ax.i1) * channels;
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const double v = w00 * p00[ch] + w10 * p10[ch] + w01 * p01[ch] + w11 * p11[ch];
      o[ch] = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

ImageBuffer warp_scatter(const ImageBuffer& src, const Transform& t, std::span<const double> fill,
                         std::size_t* holes) {
  check_fill(src, fill);
  const MappedFrame frame = map_frame(src.width(), src.height(), t);
  const std::size_t w = src.width();
  const std::size_t h = src.height();
  const std::size_t channels = src.channels();

  ImageBuffer out(w, h, channels);
  std::vector<std::uint8_t> written(w * h, 0);
  auto dst = out.data();
  const auto pixels = src.data();
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!frame.valid[i]) continue;
    const double tx = std::round(denormalize(frame.x[i], w));
    const double ty = std::round(denormalize(frame.y[i], h));
    if (!(tx >= 0.0 && ty >= 0.0 && tx <= static_cast<double>(w - 1) &&
          ty <= static_cast<double>(h - 1))) {
      continue;
    }
    const std::size_t j = static_cast<std::size_t>(ty) * w + static_cast<std::size_t>(tx);
    std::copy_n(pixels.data() + i * channels, channels, dst.data() + j * channels);
    written[j] = 1;
  }
  std::size_t unwritten = 0;
  for (std::size_t j = 0; j < w * h; ++j) {
    if (written[j]) continue;
    ++unwritten;
    std::copy(fill.begin(), fill.end(), dst.data() + j * channels);
  }
  if (holes != nullptr) *holes = unwritten;
  return out;
}

ImageBuffer warp(const ImageBuffer& src, const Transform& t, WarpMode mode,
                 std::span<const double> fill) {
  if (mode == WarpMode::ForwardScatter) return warp_scatter(src, t, fill);
  return warp_bilinear(src, build_grid(src.width(), src.height(), t), fill);
}

ImageBuffer pad_image(const ImageBuffer& img, std::size_t margin, PadPolicy policy) {
  if (margin == 0) return img;
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const std::size_t channels = img.channels();
  ImageBuffer out(w + 2 * margin, h + 2 * margin, channels);
  const auto m = static_cast<std::ptrdiff_t>(margin);

  for (std::size_t oy = 0; oy < out.height(); ++oy) {
    for (std::size_t ox = 0; ox < out.width(); ++ox) {
      const std::ptrdiff_t x = static_cast<std::ptrdiff_t>(ox) - m;
      const std::ptrdiff_t y = static_cast<std::ptrdiff_t>(oy) - m;
      const bool inside = x >= 0 && y >= 0 && x < static_cast<std::ptrdiff_t>(w) &&
                          y < static_cast<std::ptrdiff_t>(h);
      std::size_t sx = 0;
      std::size_t sy = 0;
      if (inside) {
        sx = static_cast<std::size_t>(x);
        sy = static_cast<std::size_t>(y);
      } else if (policy == PadPolicy::Zero) {
        continue;
      } else if (policy == PadPolicy::Replicate) {
        sx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(w) - 1));
        sy = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(h) - 1));
      } else {
        sx = reflect_index(x, w);
        sy = reflect_index(y, h);
      }
      const auto px = img.pixel(sx, sy);
      std::copy(px.begin(), px.end(), out.data().data() + out.index(ox, oy));
    }
  }
  return out;
}

ImageBuffer crop_margin(const ImageBuffer& img, std::size_t margin) {
  if (2 * margin >= img.width() || 2 * margin >= img.height()) {
    throw std::invalid_argument("crop margin leaves no pixels");
  }
  ImageBuffer out(img.width() - 2 * margin, img.height() - 2 * margin, img.channels());
  for (std::size_t y = 0; y < out.height(); ++y) {
    for (std::size_t x = 0; x < out.width(); ++x) {
      const auto px = img.pixel(x + margin, y + margin);
      std::copy(px.begin(), px.end(), out.data().data() + out.index(x, y));
    }
  }
  return out;
}

}  // namespace lcmwarp

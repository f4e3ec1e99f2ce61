#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lcmwarp {

// Interleaved row-major H x W x C raster with values in [0, 1].
class ImageBuffer {
 public:
  // Filled with `value`. Throws std::invalid_argument on zero sizes,
  // channel counts other than 1/3/4, or a value outside [0,1].
  ImageBuffer(std::size_t width, std::size_t height, std::size_t channels, double value = 0.0);
  // Takes ownership of `data`; validates length and range.
  ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<double> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t channels() const { return channels_; }

  std::size_t index(std::size_t x, std::size_t y, std::size_t ch = 0) const {
    return (y * width_ + x) * channels_ + ch;
  }
  double at(std::size_t x, std::size_t y, std::size_t ch = 0) const {
    return data_[index(x, y, ch)];
  }
  // Writers must keep values inside [0,1].
  double& at(std::size_t x, std::size_t y, std::size_t ch = 0) { return data_[index(x, y, ch)]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> pixel(std::size_t x, std::size_t y) const {
    return std::span<const double>(data_).subspan(index(x, y), channels_);
  }

  bool same_shape(const ImageBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t channels_;
  std::vector<double> data_;
};

// Mean absolute per-sample difference. Throws std::invalid_argument on
// shape mismatch.
double mean_abs_diff(const ImageBuffer& a, const ImageBuffer& b);
double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace lcmwarp
